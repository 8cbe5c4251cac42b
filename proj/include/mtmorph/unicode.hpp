#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtmorph/grammar.hpp"

namespace mtmorph {

std::string nfc(std::string_view text);
std::string nfd(std::string_view text);

/// Display text of a surface string: each symbol's render entry (or the
/// symbol itself), concatenated and NFC-composed.
std::string render_surface(const Grammar& g, const std::vector<Symbol>& surface);

/// Inverse of render_surface: split text into surface symbols by longest
/// match over the decomposed renderings. nullopt if some part of the text
/// is not a surface symbol.
std::optional<std::vector<Symbol>> tokenize_surface(const Grammar& g, std::string_view text);

/// ħ → H, ʔ → ', tone marks → trailing ^L / ^M / ^H.
std::string to_ascii(std::string_view text);

}  // namespace mtmorph
