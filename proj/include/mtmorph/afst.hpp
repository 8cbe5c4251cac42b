#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtmorph/interpreter.hpp"

namespace mtmorph {

class CompileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The properties of an input symbol (a licensed pair) that a rule's
/// machine can tell apart. Def is the all-false label.
struct Label {
    bool cap = false;        // matches the tuple captured before an ellipsis
    std::vector<bool> q;     // matches the i-th tuple adjacent to LEX
    bool own = false;        // licensed by this rule, LEX:SURF instantiated
    bool lexv = false;       // (<=> only) LEX matches, whatever the licensing rule
    bool sv = false;         // (<=> only) ... and the surface satisfies SURF
    std::vector<bool> r;     // matches the i-th right-context tuple

    bool is_def() const;
    auto operator<=>(const Label&) const = default;
};

/// δ(from, label, read) = (to, write). `read`/`write` name the storage
/// variable or hold "0" (read: no constraint, write: keep the cell).
struct Transition {
    std::size_t from = 0;
    std::optional<Label> label;  // nullopt = Def
    std::string read = "0";
    std::size_t to = 0;
    std::string write = "0";
};

/// A multi-tape auxiliary finite-state transducer with a single storage
/// cell, over the alphabet of licensed pairs.
class Afst {
public:
    struct Config {
        std::size_t state = 0;
        Symbol storage = "0";
        auto operator<=>(const Config&) const = default;
    };

    const std::string& name() const { return name_; }
    std::size_t state_count() const { return state_count_; }
    std::size_t start() const { return 0; }
    bool is_final(std::size_t s) const { return finals_.contains(s); }
    const std::set<std::size_t>& finals() const { return finals_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    /// Storage alphabet, excluding the empty marker.
    const std::set<Symbol>& gamma() const { return gamma_; }

    Label label_of(const LicensedPair& lp) const;
    std::vector<Config> step(const Config& c, const LicensedPair& lp) const;
    bool accepts(const std::vector<LicensedPair>& input) const;

    /// Listing in δ(p, σ, r) = (q, w) notation.
    std::string dump() const;
    std::string label_text(const std::optional<Label>& label) const;

private:
    friend Afst compile_rule(const Grammar& g, std::size_t rule, const std::vector<LicensedPair>& sigma);
    friend Afst compile_defaults(const Grammar& g, const std::vector<std::size_t>& rules,
                                 const std::vector<LicensedPair>& sigma);

    struct Values {
        Label label;
        Symbol cap = "0", q = "0", own = "0";
    };
    Values evaluate(const LicensedPair& lp) const;

    std::size_t plt_ = 0;
    std::string name_;
    std::set<std::size_t> owned_;  // licensing rules whose pairs are OWN
    bool merged_default_ = false;
    std::vector<std::string> default_texts_;
    std::optional<TuplePattern> cap_;
    std::vector<TuplePattern> q_;
    TuplePattern lex_;
    std::vector<Term> surf_;
    std::vector<TuplePattern> rlc_;
    bool composite_ = false;
    VariableRanges ranges_;
    std::string storage_var_;  // empty when the rule needs no storage
    bool store_from_cap_ = false;

    std::size_t state_count_ = 0;
    std::set<std::size_t> finals_;
    std::set<Symbol> gamma_;
    std::vector<Transition> transitions_;
    // per state: explicit labels (nullopt = blocked) and the Def transition
    std::vector<std::map<Label, std::optional<std::size_t>>> explicit_;
    std::vector<std::optional<std::size_t>> def_;
};

/// One rule's machine. Throws CompileError for rules outside the
/// compilable fragment (surface contexts, unsupported LLC shapes, more
/// than one remembered symbol: "register overflow").
Afst compile_rule(const Grammar& g, std::size_t rule, const std::vector<LicensedPair>& sigma);

/// A single-state machine standing for context-free "=>" rules.
Afst compile_defaults(const Grammar& g, const std::vector<std::size_t>& rules, const std::vector<LicensedPair>& sigma);

/// Default-style rules merged into one machine, then one machine per
/// remaining rule.
std::vector<Afst> compile_grammar(const Grammar& g);

/// Runs the compiled machines in lockstep over shared pair choices.
class AfstEngine {
public:
    explicit AfstEngine(const Grammar& g);

    std::vector<Derivation> derive(const LexicalSource& src, const std::vector<Symbol>* target) const;
    std::vector<Derivation> check(const std::vector<std::vector<Symbol>>& tapes,
                                  const std::vector<Symbol>& surface) const;
    std::vector<Generation> synthesize(const std::vector<std::vector<Symbol>>& tapes, Mode mode) const;

    const Grammar& grammar() const { return g_; }
    const std::vector<Afst>& machines() const { return machines_; }

private:
    Grammar g_;
    std::vector<LicensedPair> sigma_;
    std::vector<Afst> machines_;
};

}  // namespace mtmorph
