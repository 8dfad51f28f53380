#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "wikitag/corpus.hpp"
#include "wikitag/types.hpp"

namespace wikitag {

class KbError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SenseCandidate {
  PageId page = 0;
  std::uint32_t link_count = 0;  // occurrences of this anchor -> this page
  double commonness = 0.0;       // Pr(page | anchor)
};

struct AnchorEntry {
  std::string text;       // normalized
  std::uint64_t freq = 0;  // occurrences of the text anywhere in bodies
  std::uint64_t link = 0;  // occurrences as a link anchor
  double lp = 0.0;         // link / freq
  std::vector<SenseCandidate> senses;  // Pg(a), sorted by commonness desc
};

struct PageRecord {
  PageId id = 0;
  std::string title;
};

struct KbStats {
  std::uint64_t n_pages = 0;    // W
  std::uint64_t n_anchors = 0;
  std::uint64_t n_edges = 0;
  double avg_senses_per_anchor = 0.0;
  double avg_in_degree = 0.0;
};

class InLinkGraph {
 public:
  void SetPageCount(std::uint32_t w) { page_count_ = w; }
  std::uint32_t page_count() const { return page_count_; }

  // Strictly ascending, deduplicated source ids; empty list for unknown ids.
  const std::vector<PageId>& InLinks(PageId page) const;
  void SetInLinks(PageId page, std::vector<PageId> sources);

  std::uint64_t EdgeCount() const;
  const std::unordered_map<PageId, std::vector<PageId>>& lists() const {
    return in_links_;
  }

 private:
  std::uint32_t page_count_ = 0;
  std::unordered_map<PageId, std::vector<PageId>> in_links_;
};

class Catalog {
 public:
  void Add(PageRecord record);  // throws KbError on duplicate id or title
  const PageRecord* Find(PageId id) const;
  const PageRecord* FindByTitle(const std::string& title) const;
  std::size_t size() const { return by_id_.size(); }
  const std::unordered_map<PageId, PageRecord>& pages() const { return by_id_; }

 private:
  std::unordered_map<PageId, PageRecord> by_id_;
  std::unordered_map<std::string, PageId> by_title_;
};

struct DictionaryFilters {
  std::uint32_t min_link = 2;
  double min_lp = 0.001;
};

using AnchorDictionary = std::unordered_map<std::string, AnchorEntry>;

// Catalog = articles only.
Catalog BuildPageCatalog(const std::vector<RawPage>& pages);

// Filters (applied in order): charset/length, link >= min_link,
// lp >= min_lp with freq counted by a markup-blind scan of all bodies.
// Candidate anchors are the distinct occurrence anchors plus redirect titles
// and title variants (the title and the title minus a trailing qualifier).
AnchorDictionary BuildAnchorDictionary(
    const std::vector<LinkOccurrence>& occurrences,
    const std::vector<RawPage>& pages, const RedirectMap& titlemap,
    const Catalog& catalog, const DictionaryFilters& filters = {});

// One edge per distinct (src, dst) article pair, self-links dropped.
InLinkGraph BuildInLinkGraph(const std::vector<LinkOccurrence>& occurrences,
                             const Catalog& catalog);

class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  KnowledgeBase(Catalog catalog, AnchorDictionary anchors, InLinkGraph graph)
      : catalog_(std::move(catalog)),
        anchors_(std::move(anchors)),
        graph_(std::move(graph)) {}

  const Catalog& catalog() const { return catalog_; }
  const InLinkGraph& graph() const { return graph_; }
  const AnchorDictionary& anchors() const { return anchors_; }

  // Exact match on the normalized text; nullptr when absent.
  const AnchorEntry* LookupAnchor(std::string_view text) const;

  KbStats Stats() const;

  void Save(const std::string& path) const;
  static KnowledgeBase Load(const std::string& path);

 private:
  Catalog catalog_;
  AnchorDictionary anchors_;
  InLinkGraph graph_;
};

// Full build: parse errors aside, runs redirect resolution, catalog build,
// link extraction over every page, dictionary build and graph build.
KnowledgeBase BuildKb(const std::vector<RawPage>& pages,
                      const DictionaryFilters& filters = {});

std::uint32_t Crc32(const void* data, std::size_t size);

}  // namespace wikitag
