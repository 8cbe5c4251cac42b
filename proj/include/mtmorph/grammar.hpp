#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mtmorph/model.hpp"

namespace mtmorph {

/// Raised by the parser (and by queries on malformed grammars). Carries a
/// 1-based source position when one is known.
class GrammarError : public std::runtime_error {
public:
    GrammarError(const std::string& msg, int line = 0, int column = 0);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

enum class Operator {
    Optional,   // "=>": LEX may surface as SURF in context
    Composite,  // "<=>": additionally, LEX in context must surface as SURF
};

struct ContextItem {
    enum class Kind { Tuple, Ellipsis };
    Kind kind = Kind::Tuple;
    TuplePattern tuple;

    static ContextItem ellipsis() { return {Kind::Ellipsis, {}}; }
    bool operator==(const ContextItem&) const = default;
};

/// Side condition from a rule's "where" clause: membership (or its
/// negation) in a named set or an inline set.
struct Constraint {
    std::string var;
    bool negated = false;
    std::string set_name;  // empty for inline sets
    std::vector<Symbol> members;
    bool operator==(const Constraint&) const = default;
};

/// LSC - SURF - RSC  op  LLC - LEX - RLC
struct Rule {
    std::string id;
    Operator op = Operator::Optional;
    std::vector<Term> lsc, surf, rsc;
    std::vector<ContextItem> llc;
    TuplePattern lex;
    std::vector<TuplePattern> rlc;
    std::vector<Constraint> constraints;
    int line = 0;

    bool context_free() const { return lsc.empty() && rsc.empty() && llc.empty() && rlc.empty(); }
    bool is_default_style() const { return op == Operator::Optional && context_free(); }
    std::set<std::string> variables() const;
    bool operator==(const Rule& o) const;
};

inline const std::string kSurfaceAlphabet = "surface";

struct Grammar {
    TapeConfig tapes;
    std::map<std::string, std::vector<Symbol>> alphabets;  // per tape name, plus "surface"
    std::map<std::string, std::vector<Symbol>> sets;
    std::map<Symbol, std::string> render;                  // surface symbol -> display text
    std::set<std::string> deletion_rules;                  // rules whose firing elides a vowel
    std::vector<Rule> rules;

    const Rule* find_rule(std::string_view id) const;
    bool is_declared(std::string_view symbol) const;
    const std::vector<Symbol>& alphabet(const std::string& name) const;

    /// Range of every variable of `rule`: the intersection of the alphabets
    /// of all slots it occupies, narrowed by the rule's constraints.
    VariableRanges ranges(const Rule& rule) const;

    /// Copy with the named rules removed (grammar variants such as
    /// gemination-as-spreading are built this way).
    Grammar without(const std::set<std::string>& rule_ids) const;
};

Grammar parse_grammar(std::string_view text);
Grammar load_grammar(const std::string& path);

/// Canonical printer; parse(print(g)) is structurally identical to g.
std::string print_grammar(const Grammar& g);
std::string print_rule(const Grammar& g, const Rule& r);

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string rule;  // empty for grammar-level diagnostics
    std::string message;
};

std::vector<Diagnostic> validate_grammar(const Grammar& g);
bool has_errors(const std::vector<Diagnostic>& diags);

/// A feasible pair together with the rule whose LEX:SURF instantiates it.
struct LicensedPair {
    FeasiblePair pair;
    std::size_t rule = 0;  // index into Grammar::rules
    auto operator<=>(const LicensedPair&) const = default;
};

/// Every LEX:SURF instantiation of every rule, per licensing rule, sorted.
std::vector<LicensedPair> compute_licensed_pairs(const Grammar& g);

/// The grammar's feasible set (the licensing rule dropped), sorted.
std::set<FeasiblePair> compute_feasible_pairs(const Grammar& g);

}  // namespace mtmorph
