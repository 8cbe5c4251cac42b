#include "mtmorph/engine.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "mtmorph/unicode.hpp"

namespace mtmorph {

std::optional<EngineKind> parse_engine(std::string_view name) {
    if (name == "interpreter") return EngineKind::Interpreter;
    if (name == "afst") return EngineKind::Afst;
    return std::nullopt;
}

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(std::string(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string bare_affix(const std::string& label) {
    if (label.size() > 1 && label.back() == '-') return label.substr(0, label.size() - 1);
    if (label.size() > 1 && label.front() == '-') return label.substr(1);
    return label;
}

std::string tapes_text(const std::vector<std::vector<Symbol>>& tapes) {
    std::vector<std::string> parts;
    for (const auto& t : tapes) parts.push_back(join(t, " "));
    return join(parts, " | ");
}

// Index ranges split over the available cores; results land in slots so
// the output order does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t n, Fn fn) {
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<std::size_t>(workers, std::max<std::size_t>(1, n / 16));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace

Selection parse_selection(const Grammar& g, std::string_view text) {
    Selection s;
    s.main.assign(g.tapes.size(), "");
    for (const auto& item : split(text, ',')) {
        std::string part = trim(item);
        if (part.empty()) continue;
        auto eq = part.find('=');
        if (eq == std::string::npos) throw MorphologyError("expected key=id, got '" + part + "'");
        std::string key = trim(part.substr(0, eq)), id = trim(part.substr(eq + 1));
        if (key == "affix")
            s.affixes.push_back(id);
        else if (key == "prefix")
            s.affixes.push_back(id + "-");
        else if (key == "suffix")
            s.affixes.push_back("-" + id);
        else if (auto t = g.tapes.index_of(key))
            s.main[*t] = id;
        else
            throw MorphologyError("unknown tape '" + key + "'");
    }
    return s;
}

std::vector<std::string> Analysis::main_ids() const {
    std::vector<std::string> out;
    for (const auto* e : main) out.push_back(e ? e->id : "");
    return out;
}

std::vector<std::string> Analysis::affix_labels() const {
    std::vector<std::string> out;
    for (const auto* e : prefixes) out.push_back(e->id + "-");
    for (const auto* e : suffixes) out.push_back("-" + e->id);
    return out;
}

bool Analysis::matches(const Selection& s) const {
    if (main_ids() != s.main) return false;
    auto labels = affix_labels();
    if (labels.size() != s.affixes.size()) return false;
    std::vector<bool> used(labels.size());
    for (const auto& want : s.affixes) {
        bool found = false;
        for (std::size_t i = 0; i < labels.size() && !found; ++i) {
            if (used[i] || (want != labels[i] && want != bare_affix(labels[i]))) continue;
            used[i] = found = true;
        }
        if (!found) return false;
    }
    return true;
}

Morphology::Morphology(Grammar g, Lexicon lex)
    : g_(std::move(g)), lex_(std::move(lex)), interp_(std::make_unique<Interpreter>(g_)) {
    try {
        afst_ = std::make_unique<AfstEngine>(g_);
    } catch (const CompileError& e) {
        afst_error_ = e.what();
    }
}

const AfstEngine& Morphology::afst() const {
    if (!afst_) throw CompileError(afst_error_);
    return *afst_;
}

std::vector<std::vector<Symbol>> Morphology::resolve(const Selection& s) const {
    const auto& tapes = g_.tapes;
    if (s.main.size() != tapes.size()) throw MorphologyError("selection does not match the tape configuration");
    std::vector<const MorphemeEntry*> mains;
    for (std::size_t t = 0; t < tapes.size(); ++t) {
        if (s.main[t].empty()) throw MorphologyError("no morpheme given for tape " + tapes.names[t]);
        const MorphemeEntry* found = nullptr;
        for (const auto* e : lex_.find(s.main[t]))
            if (e->tape == t && e->slot == Slot::Main) {
                found = e;
                break;
            }
        if (!found) throw MorphologyError("unknown morpheme '" + s.main[t] + "' on tape " + tapes.names[t]);
        mains.push_back(found);
    }
    std::vector<const MorphemeEntry*> prefixes, suffixes;
    for (const auto& label : s.affixes) {
        std::string id = bare_affix(label);
        bool want_prefix = label.size() > 1 && label.back() == '-';
        bool want_suffix = label.size() > 1 && label.front() == '-';
        std::vector<const MorphemeEntry*> hits;
        for (const auto* e : lex_.find(id)) {
            if (e->slot == Slot::Prefix && !want_suffix) hits.push_back(e);
            if (e->slot == Slot::Suffix && !want_prefix) hits.push_back(e);
        }
        if (hits.empty()) throw MorphologyError("unknown affix '" + label + "'");
        if (hits.size() > 1 && hits[0]->slot != hits[1]->slot)
            throw MorphologyError("affix '" + id + "' is both a prefix and a suffix; write " + id + "- or -" + id);
        (hits[0]->slot == Slot::Prefix ? prefixes : suffixes).push_back(hits[0]);
    }

    std::vector<std::vector<Symbol>> out(tapes.size());
    for (std::size_t t = 0; t < tapes.size(); ++t) {
        if (t == tapes.plt)
            for (const auto* e : prefixes) out[t].insert(out[t].end(), e->symbols.begin(), e->symbols.end());
        out[t].insert(out[t].end(), mains[t]->symbols.begin(), mains[t]->symbols.end());
        if (t == tapes.plt)
            for (const auto* e : suffixes) out[t].insert(out[t].end(), e->symbols.begin(), e->symbols.end());
    }
    return out;
}

std::vector<Generation> Morphology::generate(const Selection& s, Mode mode, EngineKind engine) const {
    return generate_tapes(resolve(s), mode, engine);
}

std::vector<Generation> Morphology::generate_tapes(const std::vector<std::vector<Symbol>>& tapes, Mode mode,
                                                   EngineKind engine) const {
    if (engine == EngineKind::Afst) return afst().synthesize(tapes, mode);
    return interp_->synthesize(tapes, mode);
}

bool Morphology::compatible(const std::vector<const MorphemeEntry*>& main) const {
    std::optional<std::string> arity;
    for (const auto* e : main) {
        if (!e) continue;
        for (const auto& [key, value] : e->attrs) {
            if (key == "arity") {
                if (arity && *arity != value) return false;
                arity = value;
                continue;
            }
            auto t = g_.tapes.index_of(key);
            if (!t || *t >= main.size() || !main[*t]) continue;
            auto allowed = split(value, ',');
            if (std::find(allowed.begin(), allowed.end(), main[*t]->id) == allowed.end()) return false;
        }
    }
    return true;
}

std::vector<Selection> Morphology::combinations() const {
    std::vector<Selection> out;
    std::vector<const MorphemeEntry*> pick(g_.tapes.size());
    auto rec = [&](auto& self, std::size_t t) -> void {
        if (t == pick.size()) {
            if (!compatible(pick)) return;
            Selection s;
            for (const auto* e : pick) s.main.push_back(e->id);
            out.push_back(std::move(s));
            return;
        }
        for (const auto* e : lex_.main_entries(t)) {
            pick[t] = e;
            self(self, t + 1);
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<Analysis> Morphology::analyze(const std::vector<Symbol>& surface, Mode mode, EngineKind engine) const {
    LexiconSource src(lex_);
    auto derivations = engine == EngineKind::Afst ? afst().derive(src, &surface) : interp_->derive(src, &surface);
    std::map<std::vector<std::string>, Analysis> found;
    const std::size_t n = g_.tapes.size();
    for (const auto& gen : group_by_mode(g_, derivations, mode)) {
        for (const auto& d : gen.derivations) {
            auto tapes = d.tapes(n);
            std::vector<std::vector<std::vector<const MorphemeEntry*>>> options;
            for (std::size_t t = 0; t < n; ++t) options.push_back(lex_.segment(t, tapes[t]));
            std::vector<std::size_t> idx(n, 0);
            if (std::any_of(options.begin(), options.end(), [](const auto& o) { return o.empty(); })) continue;
            while (true) {
                Analysis a;
                a.surface = surface;
                a.main.assign(n, nullptr);
                for (std::size_t t = 0; t < n; ++t)
                    for (const auto* e : options[t][idx[t]]) {
                        if (e->slot == Slot::Prefix) a.prefixes.push_back(e);
                        else if (e->slot == Slot::Suffix) a.suffixes.push_back(e);
                        else a.main[t] = e;
                    }
                if (compatible(a.main)) {
                    auto key = a.main_ids();
                    for (const auto& l : a.affix_labels()) key.push_back(l);
                    auto [it, fresh] = found.try_emplace(key, std::move(a));
                    it->second.derivations.push_back(d);
                }
                std::size_t t = 0;
                while (t < n && ++idx[t] == options[t].size()) idx[t++] = 0;
                if (t == n) break;
            }
        }
    }
    std::vector<Analysis> out;
    for (auto& [key, a] : found) out.push_back(std::move(a));
    std::stable_sort(out.begin(), out.end(), [](const Analysis& a, const Analysis& b) {
        return a.morpheme_count() < b.morpheme_count();
    });
    return out;
}

std::vector<Analysis> Morphology::analyze(std::string_view text, Mode mode, EngineKind engine) const {
    auto symbols = tokenize_surface(g_, text);
    if (!symbols || symbols->empty()) return {};
    return analyze(*symbols, mode, engine);
}

std::string Morphology::render(const std::vector<Symbol>& surface) const { return render_surface(g_, surface); }

std::vector<GoldenRow> parse_golden(const Grammar& g, std::string_view text) {
    std::vector<GoldenRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() || trim(line)[0] == '#') continue;
        auto fields = split(line, '\t');
        for (auto& f : fields) f = trim(f);
        if (fields[0] == "form-id") continue;
        if (fields.size() < 4)
            throw MorphologyError("line " + std::to_string(lineno) + ": expected 4 tab-separated fields");
        GoldenRow r;
        r.form = fields[0];
        r.voice = fields[1];
        r.surface = nfc(fields[2]);
        try {
            r.selection = parse_selection(g, fields[3]);
        } catch (const MorphologyError& e) {
            throw MorphologyError("line " + std::to_string(lineno) + ": " + e.what());
        }
        r.line = lineno;
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<GoldenRow> load_golden(const std::string& path, const Grammar& g) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MorphologyError("cannot open golden table '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_golden(g, ss.str());
}

std::string GoldenReport::tsv() const {
    std::ostringstream out;
    for (const auto& r : results) {
        const char* status = r.status == GoldenResult::Status::Pass   ? "PASS"
                             : r.status == GoldenResult::Status::Fail ? "FAIL"
                                                                      : "SKIP";
        out << status << '\t' << r.row.form << '\t' << r.row.voice << '\t' << r.row.surface;
        if (r.status != GoldenResult::Status::Skip) {
            out << '\t' << (r.generated.empty() ? "-" : join(r.generated, ","));
            out << '\t' << (r.round_trip ? "round-trip" : "no-round-trip");
            if (!r.error.empty()) out << '\t' << r.error;
        }
        out << '\n';
    }
    out << "# passed " << passed << " failed " << failed << " skipped " << skipped << '\n';
    return out.str();
}

GoldenReport verify_golden(const Morphology& m, const std::vector<GoldenRow>& rows, EngineKind engine) {
    GoldenReport report;
    report.results.resize(rows.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        GoldenResult& r = report.results[i];
        r.row = rows[i];
        if (!rows[i].attested()) return;
        try {
            for (const auto& gen : m.generate(rows[i].selection, Mode::Full, engine))
                r.generated.push_back(m.render(gen.surface));
            for (const auto& a : m.analyze(std::string_view(rows[i].surface), Mode::All, engine))
                if (a.matches(rows[i].selection)) r.round_trip = true;
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        bool hit = std::find(r.generated.begin(), r.generated.end(), rows[i].surface) != r.generated.end();
        r.status = hit && r.round_trip ? GoldenResult::Status::Pass : GoldenResult::Status::Fail;
    });
    for (const auto& r : report.results) {
        if (r.status == GoldenResult::Status::Pass) ++report.passed;
        else if (r.status == GoldenResult::Status::Fail) ++report.failed;
        else ++report.skipped;
    }
    return report;
}

EquivalenceCorpus equivalence_corpus(const Morphology& m, const std::vector<GoldenRow>& golden, std::size_t samples,
                                     unsigned seed, std::size_t max_len) {
    const Grammar& g = m.grammar();
    const Lexicon& lex = m.lexicon();
    std::mt19937 rng(seed);
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

    std::set<std::vector<std::vector<Symbol>>> tapes;
    std::vector<std::string> affixes;
    for (const auto& e : lex.entries())
        if (e.slot != Slot::Main) affixes.push_back(e.slot == Slot::Prefix ? e.id + "-" : "-" + e.id);
    auto add = [&](const Selection& s) {
        try {
            tapes.insert(m.resolve(s));
        } catch (const MorphologyError&) {
        }
    };
    for (auto s : m.combinations()) {
        add(s);
        for (const auto& a : affixes) {
            s.affixes = {a};
            add(s);
        }
    }
    for (const auto& row : golden)
        if (row.attested()) add(row.selection);

    std::vector<std::vector<Symbol>> alphabets;
    for (const auto& name : g.tapes.names) alphabets.push_back(g.alphabet(name));
    // distinct random inputs; small alphabets repeat, so draw until enough are new
    for (std::size_t added = 0, tries = 0; added < samples && tries < samples * 100; ++tries) {
        std::vector<std::vector<Symbol>> sample;
        for (std::size_t t = 0; t < g.tapes.size(); ++t) {
            const auto& alpha = alphabets[t];
            std::vector<Symbol> s;
            std::vector<const MorphemeEntry*> on_tape;
            for (const auto& e : lex.entries())
                if (e.tape == t) on_tape.push_back(&e);
            if (!on_tape.empty() && pick(10) < 7) {
                s = on_tape[pick(on_tape.size())]->symbols;
                if (t == g.tapes.plt && pick(3) == 0) {
                    const auto& extra = on_tape[pick(on_tape.size())]->symbols;
                    s.insert(s.end(), extra.begin(), extra.end());
                }
                for (std::size_t edits = pick(3); edits > 0; --edits) {
                    std::size_t op = pick(3), at = pick(s.size() + 1);
                    if (op == 0 || s.empty()) s.insert(s.begin() + at, alpha[pick(alpha.size())]);
                    else if (at < s.size() && op == 1) s.erase(s.begin() + at);
                    else if (at < s.size()) s[at] = alpha[pick(alpha.size())];
                }
            } else {
                for (std::size_t len = 1 + pick(max_len); len > 0; --len) s.push_back(alpha[pick(alpha.size())]);
            }
            if (s.size() > max_len) s.resize(max_len);
            sample.push_back(std::move(s));
        }
        added += tapes.insert(std::move(sample)).second;
    }

    EquivalenceCorpus corpus;
    corpus.tapes.assign(tapes.begin(), tapes.end());

    std::vector<std::vector<Generation>> generated(corpus.tapes.size());
    parallel_for(corpus.tapes.size(),
                 [&](std::size_t i) { generated[i] = m.generate_tapes(corpus.tapes[i], Mode::All, EngineKind::Interpreter); });
    std::set<std::vector<Symbol>> surfaces;
    const auto& surface_alpha = g.alphabet(kSurfaceAlphabet);
    for (const auto& gens : generated)
        for (const auto& gen : gens) {
            if (gen.surface.empty()) continue;
            surfaces.insert(gen.surface);
            auto edited = gen.surface;
            std::size_t at = pick(edited.size());
            if (pick(2) == 0) edited.erase(edited.begin() + at);
            else edited[at] = surface_alpha[pick(surface_alpha.size())];
            if (!edited.empty()) surfaces.insert(std::move(edited));
        }
    corpus.surfaces.assign(surfaces.begin(), surfaces.end());
    return corpus;
}

std::string EquivalenceReport::tsv() const {
    std::ostringstream out;
    for (const auto& d : divergences) out << "DIVERGE\t" << d.input << '\t' << d.detail << '\n';
    out << "# generation inputs " << generation_items << " analysis inputs " << analysis_items << " divergences "
        << divergences.size() << '\n';
    return out.str();
}

namespace {

// The first derivation present on one side only, as a trace.
std::string first_difference(const std::vector<Derivation>& a, const std::vector<Derivation>& b) {
    auto missing = [](const std::vector<Derivation>& from, const std::vector<Derivation>& in) -> const Derivation* {
        for (const auto& d : from)
            if (std::none_of(in.begin(), in.end(), [&](const Derivation& o) { return o.same_steps(d); })) return &d;
        return nullptr;
    };
    if (const auto* d = missing(a, b)) return "interpreter only: " + join(d->rule_ids(), " ");
    if (const auto* d = missing(b, a)) return "afst only: " + join(d->rule_ids(), " ");
    return "derivation multiplicity differs";
}

bool same_derivations(const std::vector<Derivation>& a, const std::vector<Derivation>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].same_steps(b[i])) return false;
    return true;
}

}  // namespace

EquivalenceReport equivalence_check(const Morphology& m, const EquivalenceCorpus& corpus) {
    EquivalenceReport report;
    report.generation_items = corpus.tapes.size();
    report.analysis_items = corpus.surfaces.size();
    m.afst();

    std::vector<std::optional<Divergence>> gen_result(corpus.tapes.size());
    parallel_for(corpus.tapes.size(), [&](std::size_t i) {
        const auto& tapes = corpus.tapes[i];
        auto a = m.generate_tapes(tapes, Mode::All, EngineKind::Interpreter);
        auto b = m.generate_tapes(tapes, Mode::All, EngineKind::Afst);
        std::set<std::vector<Symbol>> sa, sb;
        for (const auto& x : a) sa.insert(x.surface);
        for (const auto& x : b) sb.insert(x.surface);
        if (sa != sb) {
            std::vector<std::string> la, lb;
            for (const auto& s : sa) la.push_back(m.render(s));
            for (const auto& s : sb) lb.push_back(m.render(s));
            gen_result[i] = Divergence{tapes_text(tapes),
                                       "surfaces {" + join(la, ",") + "} vs {" + join(lb, ",") + "}"};
            return;
        }
        for (std::size_t k = 0; k < a.size(); ++k)
            if (!same_derivations(a[k].derivations, b[k].derivations)) {
                gen_result[i] = Divergence{tapes_text(tapes), m.render(a[k].surface) + ": " +
                                                                  first_difference(a[k].derivations, b[k].derivations)};
                return;
            }
    });

    std::vector<std::optional<Divergence>> ana_result(corpus.surfaces.size());
    parallel_for(corpus.surfaces.size(), [&](std::size_t i) {
        const auto& surface = corpus.surfaces[i];
        auto a = m.analyze(surface, Mode::All, EngineKind::Interpreter);
        auto b = m.analyze(surface, Mode::All, EngineKind::Afst);
        auto ids = [](const std::vector<Analysis>& xs) {
            std::vector<std::string> out;
            for (const auto& x : xs) {
                auto parts = x.main_ids();
                for (const auto& l : x.affix_labels()) parts.push_back(l);
                out.push_back(join(parts, "+"));
            }
            return out;
        };
        auto ia = ids(a), ib = ids(b);
        if (ia != ib) {
            ana_result[i] = Divergence{m.render(surface), "analyses {" + join(ia, ",") + "} vs {" + join(ib, ",") + "}"};
            return;
        }
        for (std::size_t k = 0; k < a.size(); ++k)
            if (!same_derivations(a[k].derivations, b[k].derivations)) {
                ana_result[i] = Divergence{m.render(surface),
                                           ia[k] + ": " + first_difference(a[k].derivations, b[k].derivations)};
                return;
            }
    });

    for (auto& d : gen_result)
        if (d) report.divergences.push_back(std::move(*d));
    for (auto& d : ana_result)
        if (d) report.divergences.push_back(std::move(*d));
    return report;
}

}  // namespace mtmorph
