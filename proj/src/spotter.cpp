#include "wikitag/spotter.hpp"

#include <algorithm>

#include "wikitag/text.hpp"

namespace wikitag {

std::vector<SpotMention> FindCandidates(const std::vector<Token>& tokens,
                                        const KnowledgeBase& kb) {
  std::vector<SpotMention> mentions;
  for (std::size_t begin = 0; begin < tokens.size(); ++begin) {
    const std::size_t max_end =
        std::min(tokens.size(), begin + kMaxAnchorTokens);
    for (std::size_t end = begin + 1; end <= max_end; ++end) {
      std::string phrase = NormalizedPhrase(tokens, begin, end);
      const AnchorEntry* entry = kb.LookupAnchor(phrase);
      if (!entry) continue;
      SpotMention m;
      m.anchor = std::move(phrase);
      m.token_begin = begin;
      m.token_end = end;
      m.char_begin = tokens[begin].char_begin;
      m.char_end = tokens[end - 1].char_end;
      m.lp = entry->lp;
      mentions.push_back(std::move(m));
    }
  }
  return mentions;
}

namespace {

bool StrictlyContains(const SpotMention& outer, const SpotMention& inner) {
  return outer.token_begin <= inner.token_begin &&
         inner.token_end <= outer.token_end &&
         inner.TokenLength() < outer.TokenLength();
}

}  // namespace

std::vector<SpotMention> ResolveOverlaps(std::vector<SpotMention> mentions) {
  std::vector<std::size_t> order(mentions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (mentions[a].TokenLength() != mentions[b].TokenLength()) {
      return mentions[a].TokenLength() > mentions[b].TokenLength();
    }
    return mentions[a].token_begin < mentions[b].token_begin;
  });

  std::vector<bool> alive(mentions.size(), true);
  for (std::size_t c : order) {
    if (!alive[c]) continue;  // a dropped mention cannot drop others
    for (std::size_t m = 0; m < mentions.size(); ++m) {
      if (m == c || !alive[m]) continue;
      if (StrictlyContains(mentions[c], mentions[m]) &&
          mentions[m].lp < mentions[c].lp) {
        alive[m] = false;
      }
    }
  }

  std::vector<SpotMention> out;
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    if (alive[i]) out.push_back(std::move(mentions[i]));
  }
  std::sort(out.begin(), out.end(), [](const SpotMention& a, const SpotMention& b) {
    if (a.token_begin != b.token_begin) return a.token_begin < b.token_begin;
    return a.token_end < b.token_end;
  });
  return out;
}

std::vector<SpotMention> Spot(std::string_view text, const KnowledgeBase& kb) {
  return ResolveOverlaps(FindCandidates(Tokenize(text), kb));
}

}  // namespace wikitag
