#include "mtmorph/model.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mtmorph {

std::optional<std::size_t> TapeConfig::index_of(std::string_view name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

bool SymbolTuple::all_epsilon() const {
    return std::all_of(cells.begin(), cells.end(), [](const Symbol& s) { return is_epsilon(s); });
}

std::string SymbolTuple::str() const { return "(" + join(cells, ",") + ")"; }

std::string FeasiblePair::surf_str() const {
    return surf.empty() ? std::string(kEpsilon) : join(surf, " ");
}

std::string FeasiblePair::str() const { return lex.str() + ":" + surf_str(); }

std::string TuplePattern::str() const {
    std::vector<std::string> parts;
    parts.reserve(cells.size());
    for (const auto& c : cells) parts.push_back(c.text);
    return "(" + join(parts, ",") + ")";
}

namespace {

bool bind(const std::string& var, const Symbol& value, Bindings& env, const VariableRanges& ranges) {
    if (auto it = env.find(var); it != env.end()) return it->second == value;
    if (auto r = ranges.find(var); r != ranges.end() && !r->second.contains(value)) return false;
    env.emplace(var, value);
    return true;
}

bool match_cell(const Term& term, const Symbol& cell, Bindings& env, const VariableRanges& ranges) {
    switch (term.kind) {
        case Term::Kind::Epsilon:
            return is_epsilon(cell);
        case Term::Kind::Literal:
            return cell == term.text;
        case Term::Kind::Variable:
            return !is_epsilon(cell) && bind(term.text, cell, env, ranges);
    }
    return false;
}

}  // namespace

std::optional<Bindings> match_tuple(const TuplePattern& pattern, const SymbolTuple& candidate,
                                    const Bindings& env, const VariableRanges& ranges,
                                    std::size_t plt, MatchMode mode) {
    if (pattern.cells.size() != candidate.cells.size())
        throw std::invalid_argument("tuple arity mismatch: pattern " + pattern.str() + " vs " +
                                    candidate.str());
    Bindings out = env;
    if (mode == MatchMode::Context && pattern.plt_only) {
        if (!match_cell(pattern.cells[plt], candidate.cells[plt], out, ranges)) return std::nullopt;
        return out;
    }
    for (std::size_t i = 0; i < pattern.cells.size(); ++i)
        if (!match_cell(pattern.cells[i], candidate.cells[i], out, ranges)) return std::nullopt;
    return out;
}

std::optional<Bindings> match_surface(const std::vector<Term>& pattern,
                                      const std::vector<Symbol>& candidate, const Bindings& env,
                                      const VariableRanges& ranges) {
    Bindings out = env;
    std::size_t pos = 0;
    for (const auto& term : pattern) {
        if (term.kind == Term::Kind::Epsilon) continue;
        if (pos >= candidate.size()) return std::nullopt;
        if (!match_cell(term, candidate[pos], out, ranges)) return std::nullopt;
        ++pos;
    }
    if (pos != candidate.size()) return std::nullopt;
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::vector<std::string> split_ws(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace mtmorph
