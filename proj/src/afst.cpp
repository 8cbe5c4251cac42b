#include "mtmorph/afst.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace mtmorph {

bool Label::is_def() const {
    auto none = [](const std::vector<bool>& v) { return std::none_of(v.begin(), v.end(), [](bool b) { return b; }); };
    return !cap && !own && !lexv && !sv && none(q) && none(r);
}

namespace {

std::set<std::string> vars_of(const std::vector<Term>& terms) {
    std::set<std::string> out;
    for (const auto& t : terms)
        if (t.is_var()) out.insert(t.text);
    return out;
}

std::set<std::string> vars_of(const TuplePattern& t) { return vars_of(t.cells); }

bool intersects(const std::set<std::string>& a, const std::set<std::string>& b) {
    return std::any_of(a.begin(), a.end(), [&](const std::string& x) { return b.contains(x); });
}

std::set<std::string> intersection(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::set<std::string> out;
    for (const auto& x : a)
        if (b.contains(x)) out.insert(x);
    return out;
}

// Everything a rule's machine must remember between two steps.
struct Desc {
    int phase = 0;  // capture without adjacent tuples: 0 outside, 1 captured, 2 just emitted
    bool seen = false;
    std::vector<bool> flags;  // capture matches among the tuples adjacent to LEX
    std::set<std::size_t> qprog{0};
    std::set<std::size_t> rpend;
    std::set<std::size_t> vpend;
    auto operator<=>(const Desc&) const = default;
};

struct Outcome {
    bool blocked = false;
    Desc next;
    std::string read = "0";
    std::string write = "0";
    bool operator==(const Outcome& o) const {
        if (blocked || o.blocked) return blocked == o.blocked;
        return next == o.next && read == o.read && write == o.write;
    }
};

std::string surf_text(const std::vector<Term>& surf) {
    if (surf.empty()) return std::string(kEpsilon);
    std::vector<std::string> parts;
    for (const auto& t : surf) parts.push_back(t.text);
    return join(parts, " ");
}

std::string context_text(const TuplePattern& t, std::size_t plt) {
    return t.plt_only ? "(" + t.cells[plt].text + ")" : t.str();
}

}  // namespace

Afst::Values Afst::evaluate(const LicensedPair& lp) const {
    Values v;
    Label& l = v.label;
    l.q.assign(q_.size(), false);
    l.r.assign(rlc_.size(), false);
    if (merged_default_) {
        l.own = owned_.contains(lp.rule);
        return v;
    }
    const SymbolTuple& t = lp.pair.lex;
    const std::string& s = storage_var_;
    if (cap_) {
        if (auto m = match_tuple(*cap_, t, {}, ranges_, plt_, MatchMode::Context)) {
            l.cap = true;
            if (store_from_cap_ && m->contains(s)) v.cap = m->at(s);
        }
    }
    for (std::size_t j = 0; j < q_.size(); ++j) {
        auto m = match_tuple(q_[j], t, {}, ranges_, plt_, MatchMode::Context);
        l.q[j] = m.has_value();
        if (m && j + 1 == q_.size() && !s.empty() && !store_from_cap_ && m->contains(s)) v.q = m->at(s);
    }
    if (owned_.contains(lp.rule)) {
        auto e = match_tuple(lex_, t, {}, ranges_, plt_, MatchMode::Strict);
        if (e) e = match_surface(surf_, lp.pair.surf, *e, ranges_);
        if (e) {
            l.own = true;
            if (!s.empty() && e->contains(s)) v.own = e->at(s);
        }
    }
    if (composite_) {
        if (auto e = match_tuple(lex_, t, {}, ranges_, plt_, MatchMode::Strict)) {
            l.lexv = true;
            l.sv = match_surface(surf_, lp.pair.surf, *e, ranges_).has_value();
        }
    }
    for (std::size_t k = 0; k < rlc_.size(); ++k)
        l.r[k] = match_tuple(rlc_[k], t, {}, ranges_, plt_, MatchMode::Context).has_value();
    return v;
}

Label Afst::label_of(const LicensedPair& lp) const { return evaluate(lp).label; }

std::vector<Afst::Config> Afst::step(const Config& c, const LicensedPair& lp) const {
    Values v = evaluate(lp);
    std::optional<std::size_t> ti;
    const auto& ex = explicit_[c.state];
    if (auto it = ex.find(v.label); it != ex.end()) {
        if (!it->second) return {};
        ti = it->second;
    } else {
        ti = def_[c.state];
        if (!ti) return {};
    }
    const Transition& t = transitions_[*ti];
    if (t.read != kEpsilon && c.storage != v.own) return {};
    Config n{t.to, c.storage};
    if (t.write != kEpsilon) n.storage = store_from_cap_ ? v.cap : v.q;
    return {n};
}

bool Afst::accepts(const std::vector<LicensedPair>& input) const {
    std::set<Config> configs{Config{}};
    for (const auto& lp : input) {
        std::set<Config> next;
        for (const auto& c : configs)
            for (const auto& n : step(c, lp)) next.insert(n);
        configs = std::move(next);
    }
    return std::any_of(configs.begin(), configs.end(), [&](const Config& c) { return is_final(c.state); });
}

std::string Afst::label_text(const std::optional<Label>& label) const {
    if (!label) return "Def";
    const Label& l = *label;
    std::vector<std::string> parts;
    if (merged_default_) return l.own ? join(default_texts_, " | ") : "Def";
    if (l.cap) parts.push_back(context_text(*cap_, plt_) + ":" + (store_from_cap_ ? storage_var_ : "*"));
    for (std::size_t j = 0; j < q_.size(); ++j)
        if (l.q[j]) {
            bool writes = j + 1 == q_.size() && !storage_var_.empty() && !store_from_cap_;
            parts.push_back(context_text(q_[j], plt_) + ":" + (writes ? storage_var_ : "*"));
        }
    if (l.own) {
        parts.push_back(lex_.str() + ":" + surf_text(surf_));
    } else if (l.lexv) {
        parts.push_back(l.sv ? lex_.str() + ":" + surf_text(surf_) + " (any rule)"
                             : lex_.str() + ":¬" + surf_text(surf_));
    }
    for (std::size_t k = 0; k < rlc_.size(); ++k)
        if (l.r[k]) parts.push_back(context_text(rlc_[k], plt_) + ":*");
    return parts.empty() ? "Def" : join(parts, " & ");
}

std::string Afst::dump() const {
    std::ostringstream out;
    auto state = [](std::size_t s) { return "s" + std::to_string(s); };
    out << "machine " << name_ << "\n";
    out << "states:";
    for (std::size_t s = 0; s < state_count_; ++s) out << " " << state(s);
    out << "\nstart: " << state(start()) << "\nfinals:";
    for (auto s : finals_) out << " " << state(s);
    out << "\n";
    for (std::size_t s = 0; s < state_count_; ++s) {
        std::vector<std::size_t> order;
        if (def_[s]) order.push_back(*def_[s]);
        for (const auto& [label, ti] : explicit_[s])
            if (ti) order.push_back(*ti);
        for (auto ti : order) {
            const Transition& t = transitions_[ti];
            out << "δ(" << state(t.from) << ", " << label_text(t.label) << ", " << t.read << ") = (" << state(t.to)
                << ", " << t.write << ")\n";
        }
    }
    return out.str();
}

Afst compile_rule(const Grammar& g, std::size_t ri, const std::vector<LicensedPair>& sigma) {
    const Rule& r = g.rules.at(ri);
    auto fail = [&](const std::string& msg) { throw CompileError("rule " + r.id + ": " + msg); };
    if (!r.lsc.empty() || !r.rsc.empty()) fail("surface contexts are not supported by the compiler");

    Afst a;
    a.plt_ = g.tapes.plt;
    a.name_ = r.id;
    a.owned_ = {ri};
    a.lex_ = r.lex;
    a.surf_ = r.surf;
    a.rlc_ = r.rlc;
    a.composite_ = r.op == Operator::Composite;
    a.ranges_ = g.ranges(r);

    std::size_t first = 0;
    if (r.llc.size() >= 2 && r.llc[1].kind == ContextItem::Kind::Ellipsis) {
        a.cap_ = r.llc[0].tuple;
        first = 2;
    }
    for (std::size_t i = first; i < r.llc.size(); ++i) {
        if (r.llc[i].kind == ContextItem::Kind::Ellipsis) fail("unsupported left context shape");
        a.q_.push_back(r.llc[i].tuple);
    }
    const std::size_t m = a.q_.size();
    const std::size_t rn = a.rlc_.size();

    // Which variables must survive from one step to the next.
    std::set<std::string> cap_vars = a.cap_ ? vars_of(*a.cap_) : std::set<std::string>{};
    std::vector<std::set<std::string>> q_vars, r_vars;
    for (const auto& t : a.q_) q_vars.push_back(vars_of(t));
    for (const auto& t : a.rlc_) r_vars.push_back(vars_of(t));
    std::set<std::string> lex_vars = vars_of(r.lex), surf_vars = vars_of(r.surf);
    auto others = [&](const std::set<std::string>* self) {
        std::set<std::string> out;
        auto add = [&](const std::set<std::string>& s) {
            if (&s != self) out.insert(s.begin(), s.end());
        };
        add(cap_vars);
        for (const auto& s : q_vars) add(s);
        for (const auto& s : r_vars) add(s);
        add(lex_vars);
        add(surf_vars);
        return out;
    };
    const std::string overflow = "register overflow (more than one remembered symbol)";
    for (const auto& s : r_vars)
        if (intersects(s, others(&s))) fail(overflow);
    for (std::size_t j = 0; j + 1 < m; ++j)
        if (intersects(q_vars[j], others(&q_vars[j]))) fail(overflow);
    std::set<std::string> lex_surf = lex_vars;
    lex_surf.insert(surf_vars.begin(), surf_vars.end());
    if (intersects(cap_vars, lex_vars)) fail(overflow);
    for (const auto& s : q_vars)
        if (intersects(cap_vars, s)) fail(overflow);
    auto from_cap = intersection(cap_vars, surf_vars);
    auto from_q = m ? intersection(q_vars.back(), lex_surf) : std::set<std::string>{};
    if (from_cap.size() + from_q.size() > 1) fail(overflow);
    if (!from_cap.empty() && m > 0) fail(overflow);
    if (!from_cap.empty()) {
        a.storage_var_ = *from_cap.begin();
        a.store_from_cap_ = true;
    } else if (!from_q.empty()) {
        a.storage_var_ = *from_q.begin();
    }
    if (a.composite_ && !a.storage_var_.empty()) fail("obligatory rule with a remembered symbol is not supported");
    if (!a.storage_var_.empty()) {
        const auto& range = a.ranges_[a.storage_var_];
        a.gamma_.insert(range.begin(), range.end());
    }

    std::set<Label> labels;
    for (const auto& lp : sigma) labels.insert(a.evaluate(lp).label);
    Label def;
    def.q.assign(m, false);
    def.r.assign(rn, false);
    labels.erase(def);

    auto outcome = [&](const Desc& d, const Label& l) {
        Outcome o;
        Desc& n = o.next;
        n.phase = d.phase;
        n.seen = d.seen;
        n.flags = d.flags;
        n.qprog = {0};
        n.rpend.clear();
        for (auto k : d.rpend) {
            if (!l.r[k]) {
                o.blocked = true;
                return o;
            }
            if (k + 1 < rn) n.rpend.insert(k + 1);
        }
        for (auto k : d.vpend) {
            if (!l.r[k]) continue;
            if (k + 1 == rn) {
                o.blocked = true;
                return o;
            }
            n.vpend.insert(k + 1);
        }
        bool cap_ok = !a.cap_ || (m == 0 ? d.phase != 0 : d.seen);
        bool in_context = cap_ok && (m == 0 || d.qprog.contains(m));
        if (l.own) {
            if (!in_context) {
                o.blocked = true;
                return o;
            }
            if (!a.storage_var_.empty()) o.read = a.storage_var_;
            if (rn) n.rpend.insert(0);
        }
        if (a.composite_ && l.lexv && in_context && !l.sv) {
            if (!rn) {
                o.blocked = true;
                return o;
            }
            n.vpend.insert(0);
        }
        if (a.cap_ && m == 0) {
            if (l.cap) {
                n.phase = 1;
                if (a.store_from_cap_) o.write = a.storage_var_;
            } else if (l.own && d.phase != 0) {
                n.phase = 2;
            } else if (d.phase == 2) {
                n.phase = 1;
            }
        } else if (a.cap_) {
            n.seen = d.seen || d.flags.front();
            n.flags.erase(n.flags.begin());
            n.flags.push_back(l.cap);
        }
        for (auto j : d.qprog)
            if (j < m && l.q[j]) n.qprog.insert(j + 1);
        if (m && l.q[m - 1] && !a.storage_var_.empty() && !a.store_from_cap_) o.write = a.storage_var_;
        return o;
    };

    Desc start;
    if (a.cap_ && m > 0) start.flags.assign(m, false);
    std::map<Desc, std::size_t> ids{{start, 0}};
    std::deque<Desc> queue{start};
    std::vector<Desc> order{start};
    auto id_of = [&](const Desc& d) {
        auto [it, fresh] = ids.emplace(d, ids.size());
        if (fresh) {
            queue.push_back(d);
            order.push_back(d);
        }
        return it->second;
    };
    while (!queue.empty()) {
        Desc d = queue.front();
        queue.pop_front();
        std::size_t s = ids.at(d);
        if (a.explicit_.size() <= s) {
            a.explicit_.resize(s + 1);
            a.def_.resize(s + 1);
        }
        Outcome dout = outcome(d, def);
        if (!dout.blocked) {
            a.transitions_.push_back({s, std::nullopt, dout.read, id_of(dout.next), dout.write});
            a.def_[s] = a.transitions_.size() - 1;
        }
        for (const auto& l : labels) {
            Outcome o = outcome(d, l);
            if (!l.own && o == dout) continue;
            if (o.blocked) {
                a.explicit_[s][l] = std::nullopt;
                continue;
            }
            a.transitions_.push_back({s, l, o.read, id_of(o.next), o.write});
            a.explicit_[s][l] = a.transitions_.size() - 1;
        }
    }
    a.state_count_ = order.size();
    a.explicit_.resize(a.state_count_);
    a.def_.resize(a.state_count_);
    for (std::size_t s = 0; s < order.size(); ++s)
        if (order[s].rpend.empty()) a.finals_.insert(s);
    return a;
}

Afst compile_defaults(const Grammar& g, const std::vector<std::size_t>& rules, const std::vector<LicensedPair>& sigma) {
    Afst a;
    a.plt_ = g.tapes.plt;
    a.merged_default_ = true;
    std::vector<std::string> ids;
    for (auto ri : rules) {
        const Rule& r = g.rules.at(ri);
        a.owned_.insert(ri);
        ids.push_back(r.id);
        a.default_texts_.push_back(r.lex.str() + ":" + surf_text(r.surf));
    }
    a.name_ = "default{" + join(ids, ",") + "}";
    a.state_count_ = 1;
    a.finals_ = {0};
    a.explicit_.resize(1);
    a.transitions_.push_back({0, std::nullopt, "0", 0, "0"});
    a.def_ = {0};
    bool any_own = std::any_of(sigma.begin(), sigma.end(), [&](const LicensedPair& lp) { return a.owned_.contains(lp.rule); });
    if (any_own) {
        Label own;
        own.own = true;
        a.transitions_.push_back({0, own, "0", 0, "0"});
        a.explicit_[0][own] = 1;
    }
    return a;
}

std::vector<Afst> compile_grammar(const Grammar& g) {
    auto sigma = compute_licensed_pairs(g);
    std::vector<std::size_t> defaults;
    for (std::size_t i = 0; i < g.rules.size(); ++i)
        if (g.rules[i].is_default_style()) defaults.push_back(i);
    std::vector<Afst> out;
    out.push_back(compile_defaults(g, defaults, sigma));
    for (std::size_t i = 0; i < g.rules.size(); ++i)
        if (!g.rules[i].is_default_style()) out.push_back(compile_rule(g, i, sigma));
    return out;
}

namespace {

class MachinePolicy {
public:
    using State = std::vector<Afst::Config>;

    explicit MachinePolicy(const std::vector<Afst>& machines) : machines_(machines) {}

    State initial() const { return State(machines_.size()); }

    std::vector<std::pair<State, Bindings>> advance(const State& st, const std::vector<Step>&,
                                                    const LicensedPair& lp) const {
        std::vector<State> out{State{}};
        for (std::size_t i = 0; i < machines_.size(); ++i) {
            auto succ = machines_[i].step(st[i], lp);
            if (succ.empty()) return {};
            std::vector<State> next;
            for (const auto& partial : out)
                for (const auto& c : succ) {
                    State s = partial;
                    s.push_back(c);
                    next.push_back(std::move(s));
                }
            out = std::move(next);
        }
        std::vector<std::pair<State, Bindings>> result;
        for (auto& s : out) result.emplace_back(std::move(s), Bindings{});
        return result;
    }

    bool accept(const State& st, const std::vector<Step>&) const {
        for (std::size_t i = 0; i < machines_.size(); ++i)
            if (!machines_[i].is_final(st[i].state)) return false;
        return true;
    }

private:
    const std::vector<Afst>& machines_;
};

}  // namespace

AfstEngine::AfstEngine(const Grammar& g) : g_(g), sigma_(compute_licensed_pairs(g)), machines_(compile_grammar(g)) {}

std::vector<Derivation> AfstEngine::derive(const LexicalSource& src, const std::vector<Symbol>* target) const {
    MachinePolicy policy(machines_);
    std::vector<Derivation> out;
    Search<MachinePolicy> search(g_, sigma_, src, target, policy);
    search.run([&](const Derivation& d) { out.push_back(d); });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](const Derivation& a, const Derivation& b) { return a.same_steps(b); }),
              out.end());
    return out;
}

std::vector<Derivation> AfstEngine::check(const std::vector<std::vector<Symbol>>& tapes,
                                          const std::vector<Symbol>& surface) const {
    if (tapes.size() != g_.tapes.size()) return {};
    FixedTapes src(tapes);
    return derive(src, &surface);
}

std::vector<Generation> AfstEngine::synthesize(const std::vector<std::vector<Symbol>>& tapes, Mode mode) const {
    if (tapes.size() != g_.tapes.size()) return {};
    bool empty = std::all_of(tapes.begin(), tapes.end(), [](const auto& t) { return t.empty(); });
    if (empty) return {};
    FixedTapes src(tapes);
    return group_by_mode(g_, derive(src, nullptr), mode);
}

}  // namespace mtmorph
