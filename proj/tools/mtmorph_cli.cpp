#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtmorph/mtmorph.h"

namespace {

enum Exit { kOk = 0, kUnknown = 1, kConfig = 2, kCheckFailed = 3 };

struct Config {
    std::string grammar;
    std::string lexicon;
    std::string engine = "afst";
    std::string mode = "full";
    bool trace = false;
    std::string format = "text";
    bool ascii = false;
    std::vector<std::string> exclude;
};

struct GrammarDeleter {
    void operator()(mtm_grammar* g) const { mtm_grammar_free(g); }
};
struct MorphologyDeleter {
    void operator()(mtm_morphology* m) const { mtm_morphology_free(m); }
};
struct ResultDeleter {
    void operator()(mtm_result* r) const { mtm_result_free(r); }
};
using GrammarPtr = std::unique_ptr<mtm_grammar, GrammarDeleter>;
using MorphologyPtr = std::unique_ptr<mtm_morphology, MorphologyDeleter>;
using ResultPtr = std::unique_ptr<mtm_result, ResultDeleter>;

int exit_code(mtm_status s) {
    switch (s) {
        case MTM_OK: return kOk;
        case MTM_ERR_UNKNOWN_MORPHEME:
        case MTM_ERR_UNKNOWN_RULE: return kUnknown;
        default: return kConfig;
    }
}

int report(mtm_status s) {
    std::cerr << "mtmorph: " << mtm_last_error() << '\n';
    if (s == MTM_ERR_COMPILE) std::cerr << "mtmorph: the interpreter engine (--engine interpreter) can still run it\n";
    return exit_code(s);
}

class Session {
public:
    explicit Session(const Config& cfg) : cfg_(cfg) {}

    mtm_status open_grammar() {
        if (cfg_.grammar.empty()) {
            last_ = "no grammar given (--grammar or MTMORPH_GRAMMAR)";
            return MTM_ERR_ARGUMENT;
        }
        mtm_grammar* g = nullptr;
        if (auto s = mtm_grammar_load(cfg_.grammar.c_str(), &g); s != MTM_OK) return s;
        grammar_.reset(g);
        if (!cfg_.exclude.empty()) {
            std::vector<const char*> ids;
            for (const auto& id : cfg_.exclude) ids.push_back(id.c_str());
            mtm_grammar* reduced = nullptr;
            if (auto s = mtm_grammar_without(grammar_.get(), ids.data(), ids.size(), &reduced); s != MTM_OK) return s;
            grammar_.reset(reduced);
        }
        return MTM_OK;
    }

    mtm_status open_morphology() {
        if (auto s = open_grammar(); s != MTM_OK) return s;
        std::string lex = cfg_.lexicon;
        if (lex.empty()) {
            auto guess = std::filesystem::path(cfg_.grammar).replace_extension(".lex");
            if (std::filesystem::exists(guess)) lex = guess.string();
        }
        if (lex.empty()) {
            last_ = "no lexicon given (--lexicon)";
            return MTM_ERR_ARGUMENT;
        }
        mtm_morphology* m = nullptr;
        if (auto s = mtm_morphology_open(grammar_.get(), lex.c_str(), &m); s != MTM_OK) return s;
        morphology_.reset(m);
        return MTM_OK;
    }

    int fail(mtm_status s) {
        if (!last_.empty()) {
            std::cerr << "mtmorph: " << last_ << '\n';
            return exit_code(s);
        }
        return report(s);
    }

    mtm_grammar* grammar() const { return grammar_.get(); }
    mtm_morphology* morphology() const { return morphology_.get(); }

    mtm_engine engine() const { return cfg_.engine == "interpreter" ? MTM_ENGINE_INTERPRETER : MTM_ENGINE_AFST; }
    mtm_mode mode() const {
        return cfg_.mode == "all" ? MTM_MODE_ALL : cfg_.mode == "bare" ? MTM_MODE_BARE : MTM_MODE_FULL;
    }

    std::string display(const char* text) const {
        if (!cfg_.ascii) return text;
        mtm_result* r = nullptr;
        if (mtm_to_ascii(text, &r) != MTM_OK) return text;
        ResultPtr owned(r);
        return mtm_result_field(r, 0, 0);
    }

private:
    const Config& cfg_;
    GrammarPtr grammar_;
    MorphologyPtr morphology_;
    std::string last_;
};

std::vector<std::string> fields(const mtm_result* r, std::size_t row) {
    std::vector<std::string> out;
    for (std::size_t f = 0; f < mtm_result_fields(r, row); ++f) out.emplace_back(mtm_result_field(r, row, f));
    return out;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

nlohmann::json trace_json(const std::string& trace) {
    auto steps = nlohmann::json::array();
    for (const auto& line : lines(trace)) {
        auto a = line.find('\t'), b = line.find('\t', a + 1);
        steps.push_back({{"rule", line.substr(0, a)}, {"lex", line.substr(a + 1, b - a - 1)}, {"surf", line.substr(b + 1)}});
    }
    return steps;
}

std::string rule_sequence(const std::string& trace) {
    std::string out;
    for (const auto& line : lines(trace)) out += (out.empty() ? "" : " ") + line.substr(0, line.find('\t'));
    return out;
}

int cmd_compile(const Config& cfg) {
    Session s(cfg);
    if (auto st = s.open_grammar(); st != MTM_OK) return s.fail(st);
    mtm_result* diags = nullptr;
    if (auto st = mtm_grammar_diagnostics(s.grammar(), &diags); st != MTM_OK) return report(st);
    ResultPtr d(diags);
    for (std::size_t i = 0; i < mtm_result_rows(diags); ++i) {
        auto f = fields(diags, i);
        std::cerr << f[0] << (f[1].empty() ? "" : " " + f[1]) << ": " << f[2] << '\n';
    }
    mtm_result* machines = nullptr;
    if (auto st = mtm_grammar_compile(s.grammar(), &machines); st != MTM_OK) return report(st);
    ResultPtr m(machines);
    for (std::size_t i = 0; i < mtm_result_rows(machines); ++i) {
        auto f = fields(machines, i);
        if (cfg.format == "json-lines")
            std::cout << nlohmann::json{{"machine", f[0]}, {"states", std::stoi(f[1])}, {"transitions", std::stoi(f[2])}}
                             .dump()
                      << '\n';
        else
            std::cout << f[0] << '\t' << f[1] << " states\t" << f[2] << " transitions\n";
    }
    return kOk;
}

int cmd_generate(const Config& cfg, const std::string& selection, const std::vector<std::string>& affixes,
                 const std::vector<std::string>& extras) {
    Session s(cfg);
    if (auto st = s.open_morphology(); st != MTM_OK) return s.fail(st);

    std::string sel = selection;
    auto add = [&](const std::string& item) { sel += (sel.empty() ? "" : ",") + item; };
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const std::string& opt = extras[i];
        std::string key, value;
        if (opt.rfind("--", 0) != 0) {
            std::cerr << "mtmorph: unexpected argument '" << opt << "'\n";
            return kConfig;
        }
        if (auto eq = opt.find('='); eq != std::string::npos) {
            key = opt.substr(2, eq - 2);
            value = opt.substr(eq + 1);
        } else if (i + 1 < extras.size()) {
            key = opt.substr(2);
            value = extras[++i];
        } else {
            std::cerr << "mtmorph: option " << opt << " needs a morpheme id\n";
            return kConfig;
        }
        bool is_tape = false;
        for (std::size_t t = 0; t < mtm_grammar_tape_count(s.grammar()); ++t)
            if (key == mtm_grammar_tape_name(s.grammar(), t)) is_tape = true;
        if (!is_tape) {
            std::cerr << "mtmorph: unknown option --" << key << " (not a tape of this grammar)\n";
            return kConfig;
        }
        add(key + "=" + value);
    }
    for (const auto& a : affixes) add("affix=" + a);

    mtm_result* r = nullptr;
    if (auto st = mtm_generate(s.morphology(), sel.c_str(), s.mode(), s.engine(), &r); st != MTM_OK) return report(st);
    ResultPtr owned(r);
    for (std::size_t i = 0; i < mtm_result_rows(r); ++i) {
        auto f = fields(r, i);
        std::string surface = s.display(f[0].c_str());
        if (cfg.format == "json-lines") {
            nlohmann::json j{{"surface", surface}, {"symbols", nlohmann::json::array()}};
            std::istringstream sym(f[1]);
            for (std::string x; sym >> x;) j["symbols"].push_back(x);
            auto ds = nlohmann::json::array();
            for (std::size_t k = 2; k < f.size(); ++k)
                ds.push_back(cfg.trace ? trace_json(f[k]) : nlohmann::json(rule_sequence(f[k])));
            j["derivations"] = ds;
            std::cout << j.dump() << '\n';
            continue;
        }
        if (cfg.format == "tsv") {
            std::cout << surface;
            for (std::size_t k = 2; k < f.size(); ++k) std::cout << '\t' << rule_sequence(f[k]);
            std::cout << '\n';
        } else {
            std::cout << surface << '\n';
        }
        if (cfg.trace)
            for (std::size_t k = 2; k < f.size(); ++k) std::cout << f[k] << '\n';
    }
    return kOk;
}

int cmd_analyze(const Config& cfg, bool mode_given, const std::vector<std::string>& words) {
    Session s(cfg);
    if (auto st = s.open_morphology(); st != MTM_OK) return s.fail(st);
    const std::size_t tapes = mtm_grammar_tape_count(s.grammar());
    mtm_mode mode = mode_given ? s.mode() : MTM_MODE_ALL;
    for (const auto& word : words) {
        mtm_result* r = nullptr;
        if (auto st = mtm_analyze(s.morphology(), word.c_str(), mode, s.engine(), &r); st != MTM_OK) return report(st);
        ResultPtr owned(r);
        for (std::size_t i = 0; i < mtm_result_rows(r); ++i) {
            auto f = fields(r, i);
            std::string surface = s.display(f[0].c_str());
            if (cfg.format == "json-lines") {
                nlohmann::json j{{"surface", surface}};
                nlohmann::json morphemes = nlohmann::json::object();
                for (std::size_t t = 0; t < tapes; ++t) morphemes[mtm_grammar_tape_name(s.grammar(), t)] = f[1 + t];
                j["morphemes"] = morphemes;
                j["affixes"] = nlohmann::json::array();
                std::istringstream aff(f[1 + tapes]);
                for (std::string x; aff >> x;) j["affixes"].push_back(x);
                auto ds = nlohmann::json::array();
                for (std::size_t k = 2 + tapes; k < f.size(); ++k)
                    ds.push_back(cfg.trace ? trace_json(f[k]) : nlohmann::json(rule_sequence(f[k])));
                j["derivations"] = ds;
                std::cout << j.dump() << '\n';
                continue;
            }
            std::cout << surface;
            for (std::size_t k = 1; k <= tapes + 1; ++k) std::cout << '\t' << f[k];
            std::cout << '\n';
            if (cfg.trace)
                for (std::size_t k = 2 + tapes; k < f.size(); ++k) std::cout << f[k] << '\n';
        }
    }
    return kOk;
}

int cmd_verify(const Config& cfg, const std::string& golden) {
    Session s(cfg);
    if (auto st = s.open_morphology(); st != MTM_OK) return s.fail(st);
    mtm_result* r = nullptr;
    if (auto st = mtm_verify(s.morphology(), golden.c_str(), s.engine(), &r); st != MTM_OK) return report(st);
    ResultPtr owned(r);
    for (std::size_t i = 0; i < mtm_result_rows(r); ++i) {
        auto f = fields(r, i);
        if (cfg.format == "json-lines") {
            std::cout << nlohmann::json{{"status", f[0]}, {"form", f[1]}, {"voice", f[2]}, {"expected", f[3]},
                                        {"generated", f[4]}, {"round_trip", f[5] == "round-trip"}, {"error", f[6]}}
                             .dump()
                      << '\n';
            continue;
        }
        std::cout << f[0] << '\t' << f[1] << '\t' << f[2] << '\t' << s.display(f[3].c_str());
        if (f[0] != "SKIP") std::cout << '\t' << s.display(f[4].c_str()) << '\t' << f[5];
        if (!f[6].empty()) std::cout << '\t' << f[6];
        std::cout << '\n';
    }
    std::cout << "# " << mtm_result_summary(r) << '\n';
    return mtm_result_failures(r) ? kCheckFailed : kOk;
}

int cmd_equiv(const Config& cfg, const std::string& golden, std::size_t samples, unsigned seed) {
    Session s(cfg);
    if (auto st = s.open_morphology(); st != MTM_OK) return s.fail(st);
    mtm_result* r = nullptr;
    auto st = mtm_equivalence(s.morphology(), golden.empty() ? nullptr : golden.c_str(), samples, seed, &r);
    if (st != MTM_OK) return report(st);
    ResultPtr owned(r);
    for (std::size_t i = 0; i < mtm_result_rows(r); ++i) {
        auto f = fields(r, i);
        std::cout << "DIVERGE\t" << f[0] << '\t' << f[1] << '\n';
    }
    std::cout << "# " << mtm_result_summary(r) << '\n';
    return mtm_result_failures(r) ? kCheckFailed : kOk;
}

int cmd_dump(const Config& cfg, const std::string& rule) {
    Session s(cfg);
    if (auto st = s.open_grammar(); st != MTM_OK) return s.fail(st);
    mtm_result* r = nullptr;
    if (auto st = mtm_grammar_dump(s.grammar(), rule.c_str(), &r); st != MTM_OK) return report(st);
    ResultPtr owned(r);
    std::cout << mtm_result_field(r, 0, 0);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-tape two-level morphology: generation, analysis and machine compilation"};
    app.require_subcommand(1);
    app.fallthrough();
    Config cfg;
    app.add_option("-g,--grammar", cfg.grammar, "Grammar file (.mtl)")->envname("MTMORPH_GRAMMAR");
    app.add_option("-l,--lexicon", cfg.lexicon, "Lexicon file (.lex); defaults to the grammar path with .lex")
        ->envname("MTMORPH_LEXICON");
    app.add_option("--engine", cfg.engine, "interpreter or afst")
        ->check(CLI::IsMember({"interpreter", "afst"}))
        ->capture_default_str();
    auto* mode_opt = app.add_option("--mode", cfg.mode, "full, all or bare")
                         ->check(CLI::IsMember({"full", "all", "bare"}))
                         ->capture_default_str();
    app.add_flag("--trace", cfg.trace, "Print derivation traces");
    app.add_option("--format", cfg.format, "text, tsv or json-lines")
        ->check(CLI::IsMember({"text", "tsv", "json-lines"}))
        ->capture_default_str();
    app.add_flag("--ascii", cfg.ascii, "Transliterate surfaces to ASCII");
    app.add_option("--exclude-rule", cfg.exclude, "Drop a rule before running (repeatable)");

    auto* compile = app.add_subcommand("compile", "Validate the grammar and compile its machines");

    auto* generate = app.add_subcommand("generate", "Synthesize surfaces from morphemes (--<tape> ID ...)");
    std::string selection;
    std::vector<std::string> affixes;
    generate->add_option("--select", selection, "tape=id,... (alternative to --<tape> options)");
    generate->add_option("--affix", affixes, "Affix id, or t- / -a to force prefix / suffix (repeatable)");
    generate->allow_extras();

    auto* analyze = app.add_subcommand("analyze", "Recover morphemes from surfaces");
    std::vector<std::string> words;
    analyze->add_option("surface", words, "Surface strings")->required();

    auto* verify = app.add_subcommand("verify", "Check a golden table (form-id, voice, surface, morphemes)");
    std::string golden;
    verify->add_option("table", golden, "Golden TSV")->required();

    auto* equiv = app.add_subcommand("equiv", "Cross-check the interpreter against the compiled machines");
    std::string equiv_golden;
    std::size_t samples = 1000;
    unsigned seed = 1;
    equiv->add_option("--golden", equiv_golden, "Golden TSV whose rows join the corpus");
    equiv->add_option("--samples", samples, "Random lexical inputs")->capture_default_str();
    equiv->add_option("--seed", seed, "Random seed")->capture_default_str();

    auto* dump = app.add_subcommand("dump", "Print a rule's machine in transition notation");
    std::string rule;
    dump->add_option("rule", rule, "Rule id, or 'default' for the merged default machine")->required();

    app.allow_extras();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    auto extras = generate->remaining();
    for (const auto& x : app.remaining()) extras.push_back(x);
    if (!generate->parsed() && !extras.empty()) {
        std::cerr << "mtmorph: unexpected argument '" << extras.front() << "'\n";
        return kConfig;
    }
    if (compile->parsed()) return cmd_compile(cfg);
    if (generate->parsed()) return cmd_generate(cfg, selection, affixes, extras);
    if (analyze->parsed()) return cmd_analyze(cfg, mode_opt->count() > 0, words);
    if (verify->parsed()) return cmd_verify(cfg, golden);
    if (equiv->parsed()) return cmd_equiv(cfg, equiv_golden, samples, seed);
    if (dump->parsed()) return cmd_dump(cfg, rule);
    return kConfig;
}
