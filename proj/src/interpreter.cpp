#include "mtmorph/interpreter.hpp"

#include <algorithm>

namespace mtmorph {

std::optional<Mode> parse_mode(std::string_view name) {
    if (name == "full") return Mode::Full;
    if (name == "all") return Mode::All;
    if (name == "bare") return Mode::Bare;
    return std::nullopt;
}

namespace {

template <class TupleAt>
std::optional<Bindings> llc_match(const Grammar& g, const Rule& rule, std::size_t size, TupleAt tuple_at,
                                  Bindings env, const VariableRanges& ranges) {
    const std::size_t plt = g.tapes.plt;
    std::size_t pos = size;
    for (std::size_t i = rule.llc.size(); i-- > 0;) {
        const auto& item = rule.llc[i];
        if (item.kind == ContextItem::Kind::Tuple) {
            if (pos == 0) return std::nullopt;
            auto m = match_tuple(item.tuple, tuple_at(pos - 1), env, ranges, plt, MatchMode::Context);
            if (!m) return std::nullopt;
            env = std::move(*m);
            --pos;
            continue;
        }
        if (i == 0) return std::nullopt;
        const auto& anchor = rule.llc[--i].tuple;
        bool found = false;
        while (pos > 0) {
            --pos;
            if (auto m = match_tuple(anchor, tuple_at(pos), env, ranges, plt, MatchMode::Context)) {
                env = std::move(*m);
                found = true;
                break;
            }
        }
        if (!found) return std::nullopt;
    }
    return env;
}

struct Obligation {
    std::size_t rule;
    Bindings env;
    std::size_t next;
};

struct PolicyState {
    std::vector<Obligation> pending;   // right contexts still to be seen
    std::vector<Obligation> forbidden;  // right contexts that must not complete
};

class RulePolicy {
public:
    using State = PolicyState;

    RulePolicy(const Grammar& g, const std::vector<VariableRanges>& ranges, const std::vector<std::size_t>& composite)
        : g_(g), ranges_(ranges), composite_(composite) {}

    State initial() const { return {}; }

    std::vector<std::pair<State, Bindings>> advance(const State& st, const std::vector<Step>& history,
                                                    const LicensedPair& lp) const {
        const SymbolTuple& t = lp.pair.lex;
        const std::size_t plt = g_.tapes.plt;
        State next;
        for (const auto& ob : st.pending) {
            const Rule& r = g_.rules[ob.rule];
            auto m = match_tuple(r.rlc[ob.next], t, ob.env, ranges_[ob.rule], plt, MatchMode::Context);
            if (!m) return {};
            if (ob.next + 1 < r.rlc.size()) next.pending.push_back({ob.rule, std::move(*m), ob.next + 1});
        }
        for (const auto& ob : st.forbidden) {
            const Rule& r = g_.rules[ob.rule];
            auto m = match_tuple(r.rlc[ob.next], t, ob.env, ranges_[ob.rule], plt, MatchMode::Context);
            if (!m) continue;
            if (ob.next + 1 == r.rlc.size()) return {};
            next.forbidden.push_back({ob.rule, std::move(*m), ob.next + 1});
        }

        auto tuple_at = [&](std::size_t i) -> const SymbolTuple& { return history[i].pair.lex; };
        const Rule& r = g_.rules[lp.rule];
        const auto& ranges = ranges_[lp.rule];
        auto env = match_tuple(r.lex, t, {}, ranges, plt, MatchMode::Strict);
        if (env) env = llc_match(g_, r, history.size(), tuple_at, std::move(*env), ranges);
        if (env) env = match_surface(r.surf, lp.pair.surf, *env, ranges);
        if (!env) return {};
        if (!r.rlc.empty()) next.pending.push_back({lp.rule, *env, 0});

        for (auto ci : composite_) {
            const Rule& c = g_.rules[ci];
            auto ce = match_tuple(c.lex, t, {}, ranges_[ci], plt, MatchMode::Strict);
            if (ce) ce = llc_match(g_, c, history.size(), tuple_at, std::move(*ce), ranges_[ci]);
            if (!ce) continue;
            if (match_surface(c.surf, lp.pair.surf, *ce, ranges_[ci])) continue;
            if (c.rlc.empty()) return {};
            next.forbidden.push_back({ci, std::move(*ce), 0});
        }
        std::vector<std::pair<State, Bindings>> out;
        out.emplace_back(std::move(next), std::move(*env));
        return out;
    }

    bool accept(const State& st, const std::vector<Step>& steps) const {
        if (!st.pending.empty()) return false;
        std::vector<Symbol> surface;
        std::vector<std::size_t> offset;
        for (const auto& s : steps) {
            offset.push_back(surface.size());
            surface.insert(surface.end(), s.pair.surf.begin(), s.pair.surf.end());
        }
        for (std::size_t i = 0; i < steps.size(); ++i) {
            const Rule* r = g_.find_rule(steps[i].rule);
            if (r->lsc.empty() && r->rsc.empty()) continue;
            const auto& ranges = ranges_[static_cast<std::size_t>(r - g_.rules.data())];
            std::optional<Bindings> env = steps[i].env;
            std::size_t begin = offset[i];
            std::size_t end = begin + steps[i].pair.surf.size();
            if (r->lsc.size() > begin) return false;
            env = match_surface(r->lsc, {surface.begin() + static_cast<long>(begin - r->lsc.size()),
                                         surface.begin() + static_cast<long>(begin)},
                                *env, ranges);
            if (!env || end + r->rsc.size() > surface.size()) return false;
            env = match_surface(r->rsc, {surface.begin() + static_cast<long>(end),
                                         surface.begin() + static_cast<long>(end + r->rsc.size())},
                                *env, ranges);
            if (!env) return false;
        }
        return true;
    }

private:
    const Grammar& g_;
    const std::vector<VariableRanges>& ranges_;
    const std::vector<std::size_t>& composite_;
};

std::vector<Derivation> sorted_unique(std::vector<Derivation> ds) {
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end(), [](const Derivation& a, const Derivation& b) { return a.same_steps(b); }),
             ds.end());
    return ds;
}

}  // namespace

std::vector<Bindings> match_llc(const Grammar& g, const Rule& rule, const std::vector<SymbolTuple>& history,
                                const Bindings& env) {
    auto m = llc_match(g, rule, history.size(), [&](std::size_t i) -> const SymbolTuple& { return history[i]; },
                       env, g.ranges(rule));
    if (!m) return {};
    return {*m};
}

std::vector<Generation> group_by_mode(const Grammar& g, const std::vector<Derivation>& derivations, Mode mode) {
    auto deletions = [&](const Derivation& d) {
        return std::count_if(d.steps.begin(), d.steps.end(),
                             [&](const Step& s) { return g.deletion_rules.contains(s.rule); });
    };
    long best = 0;
    for (const auto& d : derivations) best = std::max(best, static_cast<long>(deletions(d)));

    std::map<std::vector<Symbol>, std::vector<Derivation>> groups;
    for (const auto& d : derivations) {
        long n = deletions(d);
        bool keep = mode == Mode::All || (mode == Mode::Full && n == 0) || (mode == Mode::Bare && n == best);
        if (keep) groups[d.surface()].push_back(d);
    }
    std::vector<Generation> out;
    for (auto& [surface, ds] : groups) out.push_back({surface, sorted_unique(std::move(ds))});
    return out;
}

Interpreter::Interpreter(const Grammar& g) : g_(g), sigma_(compute_licensed_pairs(g)) {
    for (std::size_t i = 0; i < g_.rules.size(); ++i) {
        ranges_.push_back(g_.ranges(g_.rules[i]));
        if (g_.rules[i].op == Operator::Composite) composite_.push_back(i);
    }
}

std::vector<Derivation> Interpreter::derive(const LexicalSource& src, const std::vector<Symbol>* target) const {
    RulePolicy policy(g_, ranges_, composite_);
    std::vector<Derivation> out;
    Search<RulePolicy> search(g_, sigma_, src, target, policy);
    search.run([&](const Derivation& d) { out.push_back(d); });
    return sorted_unique(std::move(out));
}

std::vector<Derivation> Interpreter::check(const std::vector<std::vector<Symbol>>& tapes,
                                           const std::vector<Symbol>& surface) const {
    if (tapes.size() != g_.tapes.size()) return {};
    FixedTapes src(tapes);
    return derive(src, &surface);
}

std::vector<Generation> Interpreter::synthesize(const std::vector<std::vector<Symbol>>& tapes, Mode mode) const {
    if (tapes.size() != g_.tapes.size()) return {};
    bool empty = std::all_of(tapes.begin(), tapes.end(), [](const auto& t) { return t.empty(); });
    if (empty) return {};
    FixedTapes src(tapes);
    return group_by_mode(g_, derive(src, nullptr), mode);
}

}  // namespace mtmorph
