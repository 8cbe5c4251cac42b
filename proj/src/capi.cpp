#include "mtmorph/mtmorph.h"

#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mtmorph/engine.hpp"
#include "mtmorph/unicode.hpp"

using namespace mtmorph;

struct mtm_grammar {
    Grammar g;
};

struct mtm_morphology {
    Morphology m;
};

struct mtm_result {
    std::vector<std::vector<std::string>> rows;
    std::string summary;
    std::size_t failures = 0;
};

namespace {

thread_local std::string last_error;

mtm_status fail(mtm_status s, const std::string& msg) {
    last_error = msg;
    return s;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
mtm_status guarded(Fn fn) {
    try {
        last_error.clear();
        return fn();
    } catch (const GrammarError& e) {
        return fail(MTM_ERR_GRAMMAR, e.what());
    } catch (const LexiconError& e) {
        return fail(MTM_ERR_LEXICON, e.what());
    } catch (const MorphologyError& e) {
        return fail(MTM_ERR_UNKNOWN_MORPHEME, e.what());
    } catch (const CompileError& e) {
        return fail(MTM_ERR_COMPILE, e.what());
    } catch (const std::bad_alloc&) {
        return fail(MTM_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(MTM_ERR_INTERNAL, e.what());
    }
}

mtm_status checked_grammar(Grammar g, mtm_grammar** out) {
    for (const auto& d : validate_grammar(g))
        if (d.severity == Diagnostic::Severity::Error)
            return fail(MTM_ERR_GRAMMAR, (d.rule.empty() ? "" : d.rule + ": ") + d.message);
    *out = new mtm_grammar{std::move(g)};
    return MTM_OK;
}

std::optional<Mode> to_mode(mtm_mode mode) {
    switch (mode) {
        case MTM_MODE_FULL: return Mode::Full;
        case MTM_MODE_ALL: return Mode::All;
        case MTM_MODE_BARE: return Mode::Bare;
    }
    return std::nullopt;
}

std::optional<EngineKind> to_engine(mtm_engine engine) {
    switch (engine) {
        case MTM_ENGINE_INTERPRETER: return EngineKind::Interpreter;
        case MTM_ENGINE_AFST: return EngineKind::Afst;
    }
    return std::nullopt;
}

}  // namespace

extern "C" {

const char* mtm_last_error(void) { return last_error.c_str(); }

const char* mtm_version(void) { return "0.1.0"; }

mtm_status mtm_grammar_load(const char* path, mtm_grammar** out) {
    if (!path || !out) return fail(MTM_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        std::ifstream probe(path);
        if (!probe) return fail(MTM_ERR_IO, std::string("cannot open grammar file '") + path + "'");
        return checked_grammar(load_grammar(path), out);
    });
}

mtm_status mtm_grammar_parse(const char* text, mtm_grammar** out) {
    if (!text || !out) return fail(MTM_ERR_ARGUMENT, "null argument");
    return guarded([&] { return checked_grammar(parse_grammar(text), out); });
}

mtm_status mtm_grammar_without(const mtm_grammar* g, const char* const* rule_ids, size_t count, mtm_grammar** out) {
    if (!g || !out || (count && !rule_ids)) return fail(MTM_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        std::set<std::string> ids;
        for (size_t i = 0; i < count; ++i) {
            if (!g->g.find_rule(rule_ids[i]))
                return fail(MTM_ERR_UNKNOWN_RULE, std::string("unknown rule '") + rule_ids[i] + "'");
            ids.insert(rule_ids[i]);
        }
        return checked_grammar(g->g.without(ids), out);
    });
}

void mtm_grammar_free(mtm_grammar* g) { delete g; }

size_t mtm_grammar_tape_count(const mtm_grammar* g) { return g ? g->g.tapes.size() : 0; }

const char* mtm_grammar_tape_name(const mtm_grammar* g, size_t tape) {
    if (!g || tape >= g->g.tapes.size()) return nullptr;
    return g->g.tapes.names[tape].c_str();
}

int mtm_grammar_has_rule(const mtm_grammar* g, const char* rule_id) {
    return g && rule_id && g->g.find_rule(rule_id) ? 1 : 0;
}

mtm_status mtm_grammar_print(const mtm_grammar* g, mtm_result** out) {
    if (!g || !out) return fail(MTM_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new mtm_result{{{print_grammar(g->g)}}, {}, 0};
        return MTM_OK;
    });
}

mtm_status mtm_grammar_diagnostics(const mtm_grammar* g, mtm_result** out) {
    if (!g || !out) return fail(MTM_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        auto r = std::make_unique<mtm_result>();
        for (const auto& d : validate_grammar(g->g))
            r->rows.push_back({d.severity == Diagnostic::Severity::Error ? "error" : "warning", d.rule, d.message});
        *out = r.release();
        return MTM_OK;
    });
}

mtm_status mtm_grammar_compile(const mtm_grammar* g, mtm_result** out) {
    if (!g || !out) return fail(MTM_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        auto r = std::make_unique<mtm_result>();
        for (const auto& a : compile_grammar(g->g))
            r->rows.push_back({a.name(), std::to_string(a.state_count()), std::to_string(a.transitions().size())});
        r->summary = std::to_string(r->rows.size()) + " machines";
        *out = r.release();
        return MTM_OK;
    });
}

mtm_status mtm_grammar_dump(const mtm_grammar* g, const char* rule_id, mtm_result** out) {
    if (!g || !rule_id || !out) return fail(MTM_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        const Grammar& gr = g->g;
        auto sigma = compute_licensed_pairs(gr);
        std::string id = rule_id;
        if (id == "default") {
            std::vector<std::size_t> defaults;
            for (std::size_t i = 0; i < gr.rules.size(); ++i)
                if (gr.rules[i].is_default_style()) defaults.push_back(i);
            *out = new mtm_result{{{compile_defaults(gr, defaults, sigma).dump()}}, {}, 0};
            return MTM_OK;
        }
        for (std::size_t i = 0; i < gr.rules.size(); ++i) {
            if (gr.rules[i].id != id) continue;
            Afst a = gr.rules[i].is_default_style() ? compile_defaults(gr, {i}, sigma) : compile_rule(gr, i, sigma);
            *out = new mtm_result{{{a.dump()}}, {}, 0};
            return MTM_OK;
        }
        return fail(MTM_ERR_UNKNOWN_RULE, "unknown rule '" + id + "'");
    });
}

mtm_status mtm_morphology_open(const mtm_grammar* g, const char* lexicon_path, mtm_morphology** out) {
    if (!g || !lexicon_path || !out) return fail(MTM_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        std::ifstream probe(lexicon_path);
        if (!probe) return fail(MTM_ERR_IO, std::string("cannot open lexicon file '") + lexicon_path + "'");
        *out = new mtm_morphology{Morphology(g->g, load_lexicon(lexicon_path, g->g))};
        return MTM_OK;
    });
}

void mtm_morphology_free(mtm_morphology* m) { delete m; }

mtm_status mtm_generate(const mtm_morphology* m, const char* selection, mtm_mode mode, mtm_engine engine,
                        mtm_result** out) {
    if (!m || !selection || !out) return fail(MTM_ERR_ARGUMENT, "null argument");
    auto md = to_mode(mode);
    auto en = to_engine(engine);
    if (!md || !en) return fail(MTM_ERR_ARGUMENT, "invalid mode or engine");
    return guarded([&] {
        const Morphology& mm = m->m;
        auto r = std::make_unique<mtm_result>();
        for (const auto& gen : mm.generate(parse_selection(mm.grammar(), selection), *md, *en)) {
            std::vector<std::string> row{mm.render(gen.surface), join(gen.surface, " ")};
            for (const auto& d : gen.derivations) row.push_back(format_trace(d));
            r->rows.push_back(std::move(row));
        }
        *out = r.release();
        return MTM_OK;
    });
}

mtm_status mtm_analyze(const mtm_morphology* m, const char* surface, mtm_mode mode, mtm_engine engine,
                       mtm_result** out) {
    if (!m || !surface || !out) return fail(MTM_ERR_ARGUMENT, "null argument");
    auto md = to_mode(mode);
    auto en = to_engine(engine);
    if (!md || !en) return fail(MTM_ERR_ARGUMENT, "invalid mode or engine");
    return guarded([&] {
        const Morphology& mm = m->m;
        auto r = std::make_unique<mtm_result>();
        for (const auto& a : mm.analyze(std::string_view(surface), *md, *en)) {
            std::vector<std::string> row{mm.render(a.surface)};
            for (const auto& id : a.main_ids()) row.push_back(id);
            row.push_back(join(a.affix_labels(), " "));
            for (const auto& d : a.derivations) row.push_back(format_trace(d));
            r->rows.push_back(std::move(row));
        }
        *out = r.release();
        return MTM_OK;
    });
}

mtm_status mtm_verify(const mtm_morphology* m, const char* golden_path, mtm_engine engine, mtm_result** out) {
    if (!m || !golden_path || !out) return fail(MTM_ERR_ARGUMENT, "null argument");
    auto en = to_engine(engine);
    if (!en) return fail(MTM_ERR_ARGUMENT, "invalid engine");
    return guarded([&] {
        const Morphology& mm = m->m;
        std::ifstream probe(golden_path);
        if (!probe) return fail(MTM_ERR_IO, std::string("cannot open golden table '") + golden_path + "'");
        auto report = verify_golden(mm, load_golden(golden_path, mm.grammar()), *en);
        auto r = std::make_unique<mtm_result>();
        for (const auto& res : report.results) {
            const char* status = res.status == GoldenResult::Status::Pass   ? "PASS"
                                 : res.status == GoldenResult::Status::Fail ? "FAIL"
                                                                            : "SKIP";
            r->rows.push_back({status, res.row.form, res.row.voice, res.row.surface, join(res.generated, ","),
                               res.round_trip ? "round-trip" : "no-round-trip", res.error});
        }
        r->summary = "passed " + std::to_string(report.passed) + " failed " + std::to_string(report.failed) +
                     " skipped " + std::to_string(report.skipped);
        r->failures = report.failed;
        *out = r.release();
        return MTM_OK;
    });
}

mtm_status mtm_equivalence(const mtm_morphology* m, const char* golden_path, size_t samples, unsigned seed,
                           mtm_result** out) {
    if (!m || !out) return fail(MTM_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        const Morphology& mm = m->m;
        std::vector<GoldenRow> golden;
        if (golden_path) {
            std::ifstream probe(golden_path);
            if (!probe) return fail(MTM_ERR_IO, std::string("cannot open golden table '") + golden_path + "'");
            golden = load_golden(golden_path, mm.grammar());
        }
        auto report = equivalence_check(mm, equivalence_corpus(mm, golden, samples, seed));
        auto r = std::make_unique<mtm_result>();
        for (const auto& d : report.divergences) r->rows.push_back({d.input, d.detail});
        r->summary = "generation inputs " + std::to_string(report.generation_items) + " analysis inputs " +
                     std::to_string(report.analysis_items) + " divergences " +
                     std::to_string(report.divergences.size());
        r->failures = report.divergences.size();
        *out = r.release();
        return MTM_OK;
    });
}

mtm_status mtm_to_ascii(const char* text, mtm_result** out) {
    if (!text || !out) return fail(MTM_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new mtm_result{{{to_ascii(text)}}, {}, 0};
        return MTM_OK;
    });
}

size_t mtm_result_rows(const mtm_result* r) { return r ? r->rows.size() : 0; }

size_t mtm_result_fields(const mtm_result* r, size_t row) {
    return r && row < r->rows.size() ? r->rows[row].size() : 0;
}

const char* mtm_result_field(const mtm_result* r, size_t row, size_t field) {
    if (!r || row >= r->rows.size() || field >= r->rows[row].size()) return nullptr;
    return r->rows[row][field].c_str();
}

const char* mtm_result_summary(const mtm_result* r) { return r ? r->summary.c_str() : ""; }

size_t mtm_result_failures(const mtm_result* r) { return r ? r->failures : 0; }

void mtm_result_free(mtm_result* r) { delete r; }

}  // extern "C"
