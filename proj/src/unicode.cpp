#include "mtmorph/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include <stdexcept>

namespace mtmorph {

namespace {

std::string normalize(std::string_view text, bool compose) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n =
        compose ? icu::Normalizer2::getNFCInstance(status) : icu::Normalizer2::getNFDInstance(status);
    if (U_FAILURE(status)) throw std::runtime_error("unicode normalizer unavailable");
    icu::UnicodeString in = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
    icu::UnicodeString out = n->normalize(in, status);
    if (U_FAILURE(status)) throw std::runtime_error("unicode normalization failed");
    std::string result;
    out.toUTF8String(result);
    return result;
}

std::string rendering(const Grammar& g, const Symbol& s) {
    auto it = g.render.find(s);
    return it == g.render.end() ? s : it->second;
}

}  // namespace

std::string nfc(std::string_view text) { return normalize(text, true); }
std::string nfd(std::string_view text) { return normalize(text, false); }

std::string render_surface(const Grammar& g, const std::vector<Symbol>& surface) {
    std::string out;
    for (const auto& s : surface) out += rendering(g, s);
    return nfc(out);
}

std::optional<std::vector<Symbol>> tokenize_surface(const Grammar& g, std::string_view text) {
    std::vector<std::pair<std::string, Symbol>> forms;
    for (const auto& s : g.alphabet(kSurfaceAlphabet)) forms.emplace_back(nfd(rendering(g, s)), s);
    std::string input = nfd(text);
    std::vector<Symbol> out;
    std::size_t pos = 0;
    while (pos < input.size()) {
        const std::pair<std::string, Symbol>* best = nullptr;
        for (const auto& f : forms)
            if (!f.first.empty() && input.compare(pos, f.first.size(), f.first) == 0 &&
                (!best || f.first.size() > best->first.size()))
                best = &f;
        if (!best) return std::nullopt;
        out.push_back(best->second);
        pos += best->first.size();
    }
    return out;
}

std::string to_ascii(std::string_view text) {
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"ħ", "H"}, {"ʔ", "'"}, {"\u0300", "^L"}, {"\u0304", "^M"}, {"\u0301", "^H"},
    };
    std::string input = nfd(text);
    std::string out;
    for (std::size_t pos = 0; pos < input.size();) {
        bool hit = false;
        for (const auto& [from, to] : table)
            if (input.compare(pos, from.size(), from) == 0) {
                out += to;
                pos += from.size();
                hit = true;
                break;
            }
        if (!hit) out += input[pos++];
    }
    return out;
}

}  // namespace mtmorph
