#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mtmorph {

/// An atomic token: a pattern slot (c1, v2), a radical, a vowel, a boundary
/// marker or the epsilon marker. Multi-character tokens are single symbols.
using Symbol = std::string;

inline constexpr std::string_view kEpsilon = "0";
inline constexpr std::string_view kBoundary = "+";

inline bool is_epsilon(std::string_view s) { return s == kEpsilon; }

/// Ordered lexical tape names with the primary lexical tape (PLT) marked.
struct TapeConfig {
    std::vector<std::string> names;
    std::size_t plt = 0;

    std::size_t size() const { return names.size(); }
    std::optional<std::size_t> index_of(std::string_view name) const;
    bool operator==(const TapeConfig&) const = default;
};

/// One cell per lexical tape; "0" means the head on that tape does not move.
struct SymbolTuple {
    std::vector<Symbol> cells;

    bool all_epsilon() const;
    std::string str() const;  // "(c1,d,0)"
    auto operator<=>(const SymbolTuple&) const = default;
};

/// A lexical tuple paired with a (possibly empty) surface symbol string.
struct FeasiblePair {
    SymbolTuple lex;
    std::vector<Symbol> surf;

    std::string surf_str() const;  // space-joined, "0" when empty
    std::string str() const;       // "(c1,d,0):d"
    auto operator<=>(const FeasiblePair&) const = default;
};

struct Term {
    enum class Kind { Literal, Variable, Epsilon };
    Kind kind = Kind::Literal;
    std::string text;

    static Term literal(std::string s) { return {Kind::Literal, std::move(s)}; }
    static Term variable(std::string s) { return {Kind::Variable, std::move(s)}; }
    static Term epsilon() { return {Kind::Epsilon, std::string(kEpsilon)}; }

    bool is_var() const { return kind == Kind::Variable; }
    bool operator==(const Term&) const = default;
};

/// A lexical n-tuple expression. `plt_only` marks tuples written in the
/// PLT shorthand: the non-PLT cells hold epsilon, and inside a lexical
/// context only the PLT cell is constrained.
struct TuplePattern {
    std::vector<Term> cells;
    bool plt_only = false;

    std::string str() const;
    bool operator==(const TuplePattern&) const = default;
};

using Bindings = std::map<std::string, Symbol>;
using VariableRanges = std::map<std::string, std::set<Symbol>>;

enum class MatchMode {
    Strict,   // every cell constrained (LEX)
    Context,  // PLT-shorthand tuples constrain only the PLT cell
};

/// Unify a tuple pattern against a concrete tuple, extending `env`.
/// A candidate "0" cell only matches an epsilon term; variables bind
/// non-"0" cells within their range. Arity must agree.
std::optional<Bindings> match_tuple(const TuplePattern& pattern, const SymbolTuple& candidate,
                                    const Bindings& env, const VariableRanges& ranges = {},
                                    std::size_t plt = 0, MatchMode mode = MatchMode::Strict);

/// Unify a surface term sequence (epsilon terms dropped) against symbols.
std::optional<Bindings> match_surface(const std::vector<Term>& pattern,
                                      const std::vector<Symbol>& candidate, const Bindings& env,
                                      const VariableRanges& ranges = {});

std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::vector<std::string> split_ws(std::string_view text);

}  // namespace mtmorph
