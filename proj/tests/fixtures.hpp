#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "mtmorph/engine.hpp"
#include "mtmorph/unicode.hpp"

namespace fixtures {

inline std::string data(const std::string& name) { return std::string(MTMORPH_DATA_DIR) + "/" + name; }
inline std::string golden(const std::string& name) { return std::string(MTMORPH_GOLDEN_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline const mtmorph::Grammar& grammar(const std::string& lang) {
    static std::map<std::string, mtmorph::Grammar> cache;
    auto it = cache.find(lang);
    if (it == cache.end()) it = cache.emplace(lang, mtmorph::load_grammar(data(lang + ".mtl"))).first;
    return it->second;
}

inline const mtmorph::Morphology& morphology(const std::string& lang) {
    static std::map<std::string, std::unique_ptr<mtmorph::Morphology>> cache;
    auto& slot = cache[lang];
    if (!slot) {
        const auto& g = grammar(lang);
        slot = std::make_unique<mtmorph::Morphology>(g, mtmorph::load_lexicon(data(lang + ".lex"), g));
    }
    return *slot;
}

inline std::vector<mtmorph::Symbol> syms(std::string_view text) { return mtmorph::split_ws(text); }

}  // namespace fixtures
