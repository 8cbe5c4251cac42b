#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtmorph/afst.hpp"
#include "mtmorph/interpreter.hpp"
#include "mtmorph/lexicon.hpp"

namespace mtmorph {

enum class EngineKind { Interpreter, Afst };

std::optional<EngineKind> parse_engine(std::string_view name);

/// Unknown morpheme ids, ambiguous affixes, missing tapes.
class MorphologyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Morpheme ids for one word: a main morpheme per tape (by tape index,
/// "" = unset) and PLT affixes in order. An affix is written "t-"
/// (prefix), "-a" (suffix) or by its bare id.
struct Selection {
    std::vector<std::string> main;
    std::vector<std::string> affixes;
};

/// "pattern=q3,root=dħrj,vocalism=ui,affix=a"
Selection parse_selection(const Grammar& g, std::string_view text);

struct Analysis {
    std::vector<Symbol> surface;
    std::vector<const MorphemeEntry*> main;  // per tape
    std::vector<const MorphemeEntry*> prefixes;
    std::vector<const MorphemeEntry*> suffixes;
    std::vector<Derivation> derivations;

    std::vector<std::string> main_ids() const;
    std::vector<std::string> affix_labels() const;  // "t-", "-a"
    std::size_t morpheme_count() const { return main.size() + prefixes.size() + suffixes.size(); }
    /// True if the analysis uses exactly these morphemes.
    bool matches(const Selection& s) const;
};

/// A grammar bound to a lexicon and both engines.
class Morphology {
public:
    Morphology(Grammar g, Lexicon lex);

    const Grammar& grammar() const { return g_; }
    const Lexicon& lexicon() const { return lex_; }
    const Interpreter& interpreter() const { return *interp_; }
    /// Throws CompileError if some rule is outside the compilable fragment.
    const AfstEngine& afst() const;

    /// Lexical tape contents for a selection.
    std::vector<std::vector<Symbol>> resolve(const Selection& s) const;

    std::vector<Generation> generate(const Selection& s, Mode mode, EngineKind engine) const;
    std::vector<Generation> generate_tapes(const std::vector<std::vector<Symbol>>& tapes, Mode mode,
                                           EngineKind engine) const;

    /// Sorted by (number of morphemes, ids); one entry per morpheme choice.
    std::vector<Analysis> analyze(const std::vector<Symbol>& surface, Mode mode, EngineKind engine) const;
    /// Empty if the text does not spell surface symbols.
    std::vector<Analysis> analyze(std::string_view text, Mode mode, EngineKind engine) const;

    /// Main morphemes that may co-occur: an attribute named after a tape
    /// lists the admissible ids on that tape; "arity" values must agree.
    bool compatible(const std::vector<const MorphemeEntry*>& main) const;
    /// Every compatible choice of main morphemes, without affixes.
    std::vector<Selection> combinations() const;

    std::string render(const std::vector<Symbol>& surface) const;

private:
    Grammar g_;
    Lexicon lex_;
    std::unique_ptr<Interpreter> interp_;
    std::unique_ptr<AfstEngine> afst_;
    std::string afst_error_;
};

struct GoldenRow {
    std::string form;
    std::string voice;
    std::string surface;  // "—" or "-" for an unattested cell
    Selection selection;
    int line = 0;

    bool attested() const { return surface != "—" && surface != "-" && !surface.empty(); }
};

/// TSV: form-id, voice, surface, morpheme-ids. '#' comments and a
/// "form-id" header line are skipped.
std::vector<GoldenRow> parse_golden(const Grammar& g, std::string_view text);
std::vector<GoldenRow> load_golden(const std::string& path, const Grammar& g);

struct GoldenResult {
    enum class Status { Pass, Fail, Skip };
    GoldenRow row;
    Status status = Status::Skip;
    std::vector<std::string> generated;
    bool round_trip = false;
    std::string error;
};

struct GoldenReport {
    std::vector<GoldenResult> results;
    std::size_t passed = 0, failed = 0, skipped = 0;

    bool ok() const { return failed == 0; }
    std::string tsv() const;
};

/// Each attested row must be generated (mode full) and analyzed back.
GoldenReport verify_golden(const Morphology& m, const std::vector<GoldenRow>& rows, EngineKind engine);

struct EquivalenceCorpus {
    std::vector<std::vector<std::vector<Symbol>>> tapes;  // generation inputs
    std::vector<std::vector<Symbol>> surfaces;             // analysis inputs
};

/// Every compatible combination (with and without each affix), the golden
/// rows, and `samples` distinct random lexical-tape strings of at most `max_len`
/// symbols per tape, built around lexicon entries. Surfaces are the
/// generated forms plus random edits of them.
EquivalenceCorpus equivalence_corpus(const Morphology& m, const std::vector<GoldenRow>& golden, std::size_t samples,
                                     unsigned seed, std::size_t max_len = 8);

struct Divergence {
    std::string input;
    std::string detail;
};

struct EquivalenceReport {
    std::size_t generation_items = 0, analysis_items = 0;
    std::vector<Divergence> divergences;

    bool ok() const { return divergences.empty(); }
    std::string tsv() const;
};

/// Both engines must agree on surfaces, analyses and derivations.
EquivalenceReport equivalence_check(const Morphology& m, const EquivalenceCorpus& corpus);

}  // namespace mtmorph
