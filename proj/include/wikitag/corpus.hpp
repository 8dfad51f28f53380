#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "wikitag/types.hpp"

namespace wikitag {

struct ParseError {
  std::size_t line = 0;
  std::string message;
};

struct ParsedCorpus {
  std::vector<RawPage> pages;
  std::vector<ParseError> errors;
};

// Parses one corpus line (a JSON page object). Throws CorpusError on a
// malformed line or invariant violation.
RawPage ParsePageLine(const std::string& line);

// Streams pages from a line-delimited corpus file. In strict mode the first
// malformed line aborts the parse; otherwise bad lines are reported in
// `errors` and skipped. Throws CorpusError if the file cannot be read.
ParsedCorpus ParseCorpus(const std::string& path, bool strict = false);
ParsedCorpus ParseCorpus(std::istream& in, bool strict = false);

struct RedirectMap {
  // Exact page title -> terminal article id.
  std::unordered_map<std::string, PageId> title_to_article;
  std::vector<std::string> unresolved;  // cyclic or over-deep redirect titles
};

inline constexpr int kRedirectDepthLimit = 8;

RedirectMap ResolveRedirects(const std::vector<RawPage>& pages,
                             int depth_limit = kRedirectDepthLimit);

struct ExtractStats {
  std::size_t dropped_unknown_target = 0;
  std::size_t dropped_malformed_span = 0;
};

// Emits one occurrence per well-formed [[...]] span whose resolved target is
// a catalog article. Targets outside the map (redirect dead ends,
// disambiguation/list pages, unknown titles) are dropped and counted.
std::vector<LinkOccurrence> ExtractLinks(const RawPage& page,
                                         const RedirectMap& titlemap,
                                         ExtractStats* stats = nullptr);

// Replaces every [[target|anchor]] span with its surface text, so bodies can
// be scanned the way a reader sees them.
std::string StripMarkup(std::string_view body);

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wikitag
