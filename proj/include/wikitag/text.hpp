#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wikitag/types.hpp"

namespace wikitag {

// Anchor normalization: lowercase (ASCII + Latin-1 supplement), collapse
// internal whitespace runs to single spaces, trim. UTF-8 passes through.
std::string Normalize(std::string_view text);

// Maximal runs of letters/digits become tokens; everything else separates.
// Non-ASCII UTF-8 bytes are treated as letter bytes.
std::vector<Token> Tokenize(std::string_view text);

// Joins tokens [begin, end) with single spaces and normalizes the result.
std::string NormalizedPhrase(const std::vector<Token>& tokens,
                             std::size_t begin, std::size_t end);

// True if the normalized anchor text is a single character or digits-only.
bool IsForbiddenAnchorText(std::string_view normalized);

// Drops a trailing parenthetical qualifier: "Mercury (planet)" -> "Mercury".
// Returns the input unchanged when there is no trailing qualifier.
std::string StripTitleQualifier(std::string_view title);

}  // namespace wikitag
