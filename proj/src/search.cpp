#include "mtmorph/search.hpp"

#include <sstream>

namespace mtmorph {

std::vector<Symbol> Derivation::surface() const {
    std::vector<Symbol> out;
    for (const auto& s : steps) out.insert(out.end(), s.pair.surf.begin(), s.pair.surf.end());
    return out;
}

std::vector<std::string> Derivation::rule_ids() const {
    std::vector<std::string> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.rule);
    return out;
}

std::vector<std::vector<Symbol>> Derivation::tapes(std::size_t tape_count) const {
    std::vector<std::vector<Symbol>> out(tape_count);
    for (const auto& s : steps)
        for (std::size_t i = 0; i < tape_count && i < s.pair.lex.cells.size(); ++i)
            if (!is_epsilon(s.pair.lex.cells[i])) out[i].push_back(s.pair.lex.cells[i]);
    return out;
}

bool Derivation::same_steps(const Derivation& o) const {
    if (steps.size() != o.steps.size()) return false;
    for (std::size_t i = 0; i < steps.size(); ++i)
        if (steps[i].pair != o.steps[i].pair || steps[i].rule != o.steps[i].rule) return false;
    return true;
}

bool operator<(const Derivation& a, const Derivation& b) {
    auto ra = a.rule_ids(), rb = b.rule_ids();
    if (ra != rb) return ra < rb;
    for (std::size_t i = 0; i < a.steps.size() && i < b.steps.size(); ++i)
        if (a.steps[i].pair != b.steps[i].pair) return a.steps[i].pair < b.steps[i].pair;
    return a.steps.size() < b.steps.size();
}

std::string format_trace(const Derivation& d) {
    std::ostringstream out;
    for (const auto& s : d.steps) out << s.rule << '\t' << s.pair.lex.str() << '\t' << s.pair.surf_str() << '\n';
    return out.str();
}

std::vector<LexicalSource::State> FixedTapes::advance(std::size_t tape, State s, const Symbol& symbol) const {
    const auto& t = tapes_[tape];
    if (s < t.size() && t[s] == symbol) return {s + 1};
    return {};
}

}  // namespace mtmorph
