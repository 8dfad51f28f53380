#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wikitag {

using PageId = std::int32_t;

// Sentinel sense for pruned or undecidable mentions.
inline constexpr PageId kNoAnnotation = -1;

enum class PageKind { kArticle, kRedirect, kDisambiguation, kList };

const char* ToString(PageKind kind);
std::optional<PageKind> PageKindFromString(const std::string& s);

// One page as read from the corpus file, before any filtering.
struct RawPage {
  PageId id = 0;
  std::string title;
  PageKind kind = PageKind::kArticle;
  std::string redirect_to;  // only for kind == kRedirect
  std::string body;         // inline [[target|anchor]] markup
};

// A link markup occurrence whose target resolved to a catalog article.
struct LinkOccurrence {
  PageId source = 0;
  PageId target = 0;          // post-redirect article id
  std::string anchor;         // normalized surface text
  std::size_t char_begin = 0; // span of the [[...]] markup in the body
  std::size_t char_end = 0;
};

struct Token {
  std::string surface;
  std::size_t char_begin = 0;
  std::size_t char_end = 0;
};

// An anchor occurrence detected in an input text.
struct SpotMention {
  std::string anchor;          // normalized dictionary key
  std::size_t token_begin = 0; // inclusive token index
  std::size_t token_end = 0;   // exclusive token index
  std::size_t char_begin = 0;
  std::size_t char_end = 0;
  double lp = 0.0;

  std::size_t TokenLength() const { return token_end - token_begin; }
};

}  // namespace wikitag
