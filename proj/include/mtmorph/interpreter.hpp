#pragma once

#include <string>
#include <vector>

#include "mtmorph/search.hpp"

namespace mtmorph {

enum class Mode {
    Full,  // no vowel-deletion rule fired
    All,   // every vocalisation variant
    Bare,  // as many deletions as the input allows
};

std::optional<Mode> parse_mode(std::string_view name);

/// A surface string with the derivations that produce it.
struct Generation {
    std::vector<Symbol> surface;
    std::vector<Derivation> derivations;
};

/// Match a left lexical context right-aligned against the consumed tuples.
/// An ellipsis skips tuples up to the nearest one matching the item to its
/// left. Returns the (at most one) extension of `env`.
std::vector<Bindings> match_llc(const Grammar& g, const Rule& rule, const std::vector<SymbolTuple>& history,
                                const Bindings& env);

/// Filter derivations by vocalisation mode and group them by surface,
/// sorted by surface.
std::vector<Generation> group_by_mode(const Grammar& g, const std::vector<Derivation>& derivations, Mode mode);

/// Direct, search-based execution of the rules.
class Interpreter {
public:
    explicit Interpreter(const Grammar& g);

    /// Every derivation over `src`; with a target the surface is fixed,
    /// otherwise it is generated.
    std::vector<Derivation> derive(const LexicalSource& src, const std::vector<Symbol>* target) const;

    std::vector<Derivation> check(const std::vector<std::vector<Symbol>>& tapes,
                                  const std::vector<Symbol>& surface) const;
    std::vector<Generation> synthesize(const std::vector<std::vector<Symbol>>& tapes, Mode mode) const;

    const Grammar& grammar() const { return g_; }

private:
    Grammar g_;
    std::vector<LicensedPair> sigma_;
    std::vector<VariableRanges> ranges_;
    std::vector<std::size_t> composite_;
};

}  // namespace mtmorph
