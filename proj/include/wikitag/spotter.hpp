#pragma once

#include <string_view>
#include <vector>

#include "wikitag/kb.hpp"
#include "wikitag/types.hpp"

namespace wikitag {

inline constexpr std::size_t kMaxAnchorTokens = 6;

// Every token window of length 1..6 whose normalization hits the dictionary,
// overlaps included.
std::vector<SpotMention> FindCandidates(const std::vector<Token>& tokens,
                                        const KnowledgeBase& kb);

// Drops a mention nested strictly inside another iff its lp is strictly
// smaller; partially overlapping mentions are both kept. Containers are
// processed by decreasing token length then position, and a dropped mention
// cannot drop others. Output sorted by start.
std::vector<SpotMention> ResolveOverlaps(std::vector<SpotMention> mentions);

// Tokenize + FindCandidates + ResolveOverlaps.
std::vector<SpotMention> Spot(std::string_view text, const KnowledgeBase& kb);

}  // namespace wikitag
