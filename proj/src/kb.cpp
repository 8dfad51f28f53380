#include "wikitag/kb.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "wikitag/text.hpp"

namespace wikitag {

namespace {

std::vector<std::string> SplitWords(const std::string& normalized) {
  std::vector<std::string> words;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    std::size_t space = normalized.find(' ', pos);
    if (space == std::string::npos) space = normalized.size();
    if (space > pos) words.push_back(normalized.substr(pos, space - pos));
    pos = space + 1;
  }
  return words;
}

}  // namespace

const std::vector<PageId>& InLinkGraph::InLinks(PageId page) const {
  static const std::vector<PageId> kEmpty;
  auto it = in_links_.find(page);
  return it == in_links_.end() ? kEmpty : it->second;
}

void InLinkGraph::SetInLinks(PageId page, std::vector<PageId> sources) {
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  if (sources.empty()) {
    in_links_.erase(page);
  } else {
    in_links_[page] = std::move(sources);
  }
}

std::uint64_t InLinkGraph::EdgeCount() const {
  std::uint64_t total = 0;
  for (const auto& [page, list] : in_links_) total += list.size();
  return total;
}

void Catalog::Add(PageRecord record) {
  if (by_id_.count(record.id)) {
    throw KbError("duplicate page id " + std::to_string(record.id));
  }
  if (by_title_.count(record.title)) {
    throw KbError("duplicate page title '" + record.title + "'");
  }
  by_title_.emplace(record.title, record.id);
  by_id_.emplace(record.id, std::move(record));
}

const PageRecord* Catalog::Find(PageId id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &it->second;
}

const PageRecord* Catalog::FindByTitle(const std::string& title) const {
  auto it = by_title_.find(title);
  return it == by_title_.end() ? nullptr : Find(it->second);
}

Catalog BuildPageCatalog(const std::vector<RawPage>& pages) {
  Catalog catalog;
  for (const RawPage& p : pages) {
    if (p.kind != PageKind::kArticle) continue;
    catalog.Add(PageRecord{p.id, p.title});
  }
  return catalog;
}

InLinkGraph BuildInLinkGraph(const std::vector<LinkOccurrence>& occurrences,
                             const Catalog& catalog) {
  std::unordered_map<PageId, std::set<PageId>> in;
  for (const LinkOccurrence& occ : occurrences) {
    if (occ.source == occ.target) continue;
    if (!catalog.Find(occ.source) || !catalog.Find(occ.target)) continue;
    in[occ.target].insert(occ.source);
  }
  InLinkGraph graph;
  graph.SetPageCount(static_cast<std::uint32_t>(catalog.size()));
  for (auto& [page, sources] : in) {
    graph.SetInLinks(page, std::vector<PageId>(sources.begin(), sources.end()));
  }
  return graph;
}

namespace {

// Token trie over candidate anchor word sequences (window of 6 tokens).
struct TrieNode {
  std::unordered_map<std::string, std::size_t> next;
  int anchor = -1;  // index into the candidate list, -1 if not terminal
};

class TokenTrie {
 public:
  void Insert(const std::vector<std::string>& words, int anchor_index) {
    if (nodes_.empty()) nodes_.emplace_back();
    std::size_t node = 0;
    for (const std::string& w : words) {
      auto [it, inserted] = nodes_[node].next.emplace(w, nodes_.size());
      if (inserted) nodes_.emplace_back();
      node = it->second;
    }
    nodes_[node].anchor = anchor_index;
  }

  // Calls visit(anchor_index, length_in_tokens) for every anchor matching a
  // prefix of tokens[start..].
  template <typename Visit>
  void MatchAt(const std::vector<std::string>& tokens, std::size_t start,
               Visit visit) const {
    if (nodes_.empty()) return;
    std::size_t node = 0;
    const std::size_t limit = std::min(tokens.size(), start + 6);
    for (std::size_t i = start; i < limit; ++i) {
      auto it = nodes_[node].next.find(tokens[i]);
      if (it == nodes_[node].next.end()) return;
      node = it->second;
      if (nodes_[node].anchor >= 0) visit(nodes_[node].anchor, i - start + 1);
    }
  }

 private:
  std::vector<TrieNode> nodes_;
};

}  // namespace

AnchorDictionary BuildAnchorDictionary(
    const std::vector<LinkOccurrence>& occurrences,
    const std::vector<RawPage>& pages, const RedirectMap& titlemap,
    const Catalog& catalog, const DictionaryFilters& filters) {
  // Per-anchor, per-sense link counts from real occurrences.
  std::map<std::string, std::map<PageId, std::uint32_t>> counts;
  for (const LinkOccurrence& occ : occurrences) {
    if (!catalog.Find(occ.target)) continue;
    ++counts[occ.anchor][occ.target];
  }

  // Redirect titles and title variants become anchors too, each contributing
  // one synthetic association to its page (the title itself counts as one
  // occurrence of the text).
  std::set<std::pair<std::string, PageId>> synthetic;
  for (const auto& [id, record] : catalog.pages()) {
    synthetic.emplace(Normalize(record.title), id);
    std::string stripped = StripTitleQualifier(record.title);
    if (stripped != record.title) synthetic.emplace(Normalize(stripped), id);
  }
  for (const RawPage& p : pages) {
    if (p.kind != PageKind::kRedirect) continue;
    auto it = titlemap.title_to_article.find(p.title);
    if (it == titlemap.title_to_article.end()) continue;
    synthetic.emplace(Normalize(p.title), it->second);
  }
  std::map<std::string, std::uint32_t> synthetic_per_anchor;
  for (const auto& [text, page] : synthetic) {
    if (text.empty()) continue;
    ++counts[text][page];
    ++synthetic_per_anchor[text];
  }

  // Filter 1: charset and token length.
  std::vector<std::string> candidates;
  std::vector<std::uint64_t> occ_links;
  for (const auto& [text, senses] : counts) {
    if (IsForbiddenAnchorText(text)) continue;
    if (SplitWords(text).size() > 6) continue;
    std::uint64_t link = 0;
    for (const auto& [page, n] : senses) link += n;
    if (link < filters.min_link) continue;  // filter 2
    candidates.push_back(text);
    occ_links.push_back(link);
  }

  // Count freq by scanning all bodies (markup stripped) for the normalized
  // token sequences, non-overlapping per anchor, left to right.
  TokenTrie trie;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    trie.Insert(SplitWords(candidates[i]), static_cast<int>(i));
  }
  std::vector<std::uint64_t> freqs(candidates.size(), 0);
  std::vector<std::size_t> next_allowed(candidates.size(), 0);
  for (const RawPage& p : pages) {
    std::fill(next_allowed.begin(), next_allowed.end(), 0);
    std::vector<Token> raw = Tokenize(StripMarkup(p.body));
    std::vector<std::string> tokens;
    tokens.reserve(raw.size());
    for (const Token& t : raw) tokens.push_back(Normalize(t.surface));
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      trie.MatchAt(tokens, i, [&](int anchor, std::size_t len) {
        if (next_allowed[anchor] > i) return;
        ++freqs[anchor];
        next_allowed[anchor] = i + len;
      });
    }
  }

  AnchorDictionary dict;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const std::string& text = candidates[i];
    std::uint32_t synth = 0;
    if (auto it = synthetic_per_anchor.find(text);
        it != synthetic_per_anchor.end()) {
      synth = it->second;
    }
    const std::uint64_t link = occ_links[i];
    const std::uint64_t freq = freqs[i] + synth;
    if (freq < link) {
      throw KbError("anchor '" + text + "' has freq " + std::to_string(freq) +
                    " < link " + std::to_string(link));
    }
    const double lp = static_cast<double>(link) / static_cast<double>(freq);
    if (lp < filters.min_lp) continue;  // filter 3

    AnchorEntry entry;
    entry.text = text;
    entry.freq = freq;
    entry.link = link;
    entry.lp = lp;
    for (const auto& [page, n] : counts[text]) {
      SenseCandidate sense;
      sense.page = page;
      sense.link_count = n;
      sense.commonness = static_cast<double>(n) / static_cast<double>(link);
      entry.senses.push_back(sense);
    }
    std::sort(entry.senses.begin(), entry.senses.end(),
              [](const SenseCandidate& a, const SenseCandidate& b) {
                if (a.commonness != b.commonness) {
                  return a.commonness > b.commonness;
                }
                return a.page < b.page;
              });
    dict.emplace(text, std::move(entry));
  }
  return dict;
}

const AnchorEntry* KnowledgeBase::LookupAnchor(std::string_view text) const {
  auto it = anchors_.find(Normalize(text));
  return it == anchors_.end() ? nullptr : &it->second;
}

KbStats KnowledgeBase::Stats() const {
  KbStats stats;
  stats.n_pages = catalog_.size();
  stats.n_anchors = anchors_.size();
  stats.n_edges = graph_.EdgeCount();
  std::uint64_t total_senses = 0;
  for (const auto& [text, entry] : anchors_) total_senses += entry.senses.size();
  if (stats.n_anchors > 0) {
    stats.avg_senses_per_anchor =
        static_cast<double>(total_senses) / static_cast<double>(stats.n_anchors);
  }
  if (stats.n_pages > 0) {
    stats.avg_in_degree =
        static_cast<double>(stats.n_edges) / static_cast<double>(stats.n_pages);
  }
  return stats;
}

KnowledgeBase BuildKb(const std::vector<RawPage>& pages,
                      const DictionaryFilters& filters) {
  RedirectMap titlemap = ResolveRedirects(pages);
  Catalog catalog = BuildPageCatalog(pages);
  std::vector<LinkOccurrence> occurrences;
  for (const RawPage& p : pages) {
    auto links = ExtractLinks(p, titlemap);
    occurrences.insert(occurrences.end(), links.begin(), links.end());
  }
  AnchorDictionary dict =
      BuildAnchorDictionary(occurrences, pages, titlemap, catalog, filters);
  InLinkGraph graph = BuildInLinkGraph(occurrences, catalog);
  return KnowledgeBase(std::move(catalog), std::move(dict), std::move(graph));
}

// ---------------------------------------------------------------------------
// Binary index file: magic "WKTG", version, little-endian integers, sections
// (catalog, dictionary, graph, stats) each length-prefixed and checksummed.
// See INDEX_FORMAT.md.
// ---------------------------------------------------------------------------

std::uint32_t Crc32(const void* data, std::size_t size) {
  static const std::array<std::uint32_t, 256> table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) {
        c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      }
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = 0xFFFFFFFFu;
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    crc = table[(crc ^ bytes[i]) & 0xFF] ^ (crc >> 8);
  }
  return crc ^ 0xFFFFFFFFu;
}

namespace {

constexpr char kMagic[4] = {'W', 'K', 'T', 'G'};
constexpr std::uint16_t kFormatMajor = 1;
constexpr std::uint16_t kFormatMinor = 0;

class SectionWriter {
 public:
  void U16(std::uint16_t v) { Raw(&v, 2); }
  void U32(std::uint32_t v) { Raw(&v, 4); }
  void U64(std::uint64_t v) { Raw(&v, 8); }
  void I32(std::int32_t v) { Raw(&v, 4); }
  void F64(double v) { Raw(&v, 8); }
  void Varint(std::uint64_t v) {
    while (v >= 0x80) {
      buf_.push_back(static_cast<char>((v & 0x7F) | 0x80));
      v >>= 7;
    }
    buf_.push_back(static_cast<char>(v));
  }
  void Str(const std::string& s) {
    U32(static_cast<std::uint32_t>(s.size()));
    buf_.append(s);
  }
  void Flush(std::ostream& out) {
    std::uint64_t len = buf_.size();
    std::uint32_t crc = Crc32(buf_.data(), buf_.size());
    out.write(reinterpret_cast<const char*>(&len), 8);
    out.write(reinterpret_cast<const char*>(&crc), 4);
    out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    buf_.clear();
  }

 private:
  void Raw(const void* p, std::size_t n) {
    buf_.append(static_cast<const char*>(p), n);
  }
  std::string buf_;
};

class SectionReader {
 public:
  SectionReader(std::istream& in, const char* name) {
    std::uint64_t len = 0;
    std::uint32_t crc = 0;
    in.read(reinterpret_cast<char*>(&len), 8);
    in.read(reinterpret_cast<char*>(&crc), 4);
    if (!in) throw KbError(std::string("truncated index: ") + name);
    buf_.resize(len);
    in.read(buf_.data(), static_cast<std::streamsize>(len));
    if (!in || static_cast<std::uint64_t>(in.gcount()) != len) {
      throw KbError(std::string("truncated index section: ") + name);
    }
    if (Crc32(buf_.data(), buf_.size()) != crc) {
      throw KbError(std::string("checksum mismatch in section: ") + name);
    }
  }

  std::uint16_t U16() { std::uint16_t v; Raw(&v, 2); return v; }
  std::uint32_t U32() { std::uint32_t v; Raw(&v, 4); return v; }
  std::uint64_t U64() { std::uint64_t v; Raw(&v, 8); return v; }
  std::int32_t I32() { std::int32_t v; Raw(&v, 4); return v; }
  double F64() { double v; Raw(&v, 8); return v; }
  std::uint64_t Varint() {
    std::uint64_t v = 0;
    int shift = 0;
    while (true) {
      if (pos_ >= buf_.size() || shift > 63) {
        throw KbError("corrupt varint in index");
      }
      unsigned char b = static_cast<unsigned char>(buf_[pos_++]);
      v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
      if (!(b & 0x80)) return v;
      shift += 7;
    }
  }
  std::string Str() {
    std::uint32_t n = U32();
    if (pos_ + n > buf_.size()) throw KbError("corrupt string in index");
    std::string s(buf_.data() + pos_, n);
    pos_ += n;
    return s;
  }

 private:
  void Raw(void* p, std::size_t n) {
    if (pos_ + n > buf_.size()) throw KbError("index section overrun");
    std::memcpy(p, buf_.data() + pos_, n);
    pos_ += n;
  }
  std::string buf_;
  std::size_t pos_ = 0;
};

}  // namespace

void KnowledgeBase::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw KbError("cannot open index file for writing: " + path);
  out.write(kMagic, 4);
  // Header section carries just the version.
  {
    SectionWriter w;
    w.U16(kFormatMajor);
    w.U16(kFormatMinor);
    w.Flush(out);
  }
  // Catalog, sorted by id for a deterministic file.
  {
    SectionWriter w;
    std::vector<const PageRecord*> records;
    records.reserve(catalog_.size());
    for (const auto& [id, rec] : catalog_.pages()) records.push_back(&rec);
    std::sort(records.begin(), records.end(),
              [](const PageRecord* a, const PageRecord* b) { return a->id < b->id; });
    w.U32(static_cast<std::uint32_t>(records.size()));
    for (const PageRecord* rec : records) {
      w.I32(rec->id);
      w.Str(rec->title);
    }
    w.Flush(out);
  }
  // Dictionary, sorted by anchor text.
  {
    SectionWriter w;
    std::vector<const AnchorEntry*> entries;
    entries.reserve(anchors_.size());
    for (const auto& [text, entry] : anchors_) entries.push_back(&entry);
    std::sort(entries.begin(), entries.end(),
              [](const AnchorEntry* a, const AnchorEntry* b) {
                return a->text < b->text;
              });
    w.U32(static_cast<std::uint32_t>(entries.size()));
    for (const AnchorEntry* e : entries) {
      w.Str(e->text);
      w.U64(e->freq);
      w.U64(e->link);
      w.U32(static_cast<std::uint32_t>(e->senses.size()));
      for (const SenseCandidate& s : e->senses) {
        w.I32(s.page);
        w.U32(s.link_count);
      }
    }
    w.Flush(out);
  }
  // Graph: sorted-delta encoded in-link lists.
  {
    SectionWriter w;
    w.U32(graph_.page_count());
    std::vector<PageId> keys;
    for (const auto& [page, list] : graph_.lists()) keys.push_back(page);
    std::sort(keys.begin(), keys.end());
    w.U32(static_cast<std::uint32_t>(keys.size()));
    for (PageId page : keys) {
      const auto& list = graph_.InLinks(page);
      w.I32(page);
      w.Varint(list.size());
      PageId prev = 0;
      for (PageId src : list) {
        w.Varint(static_cast<std::uint64_t>(src - prev));
        prev = src;
      }
    }
    w.Flush(out);
  }
  // Stats.
  {
    SectionWriter w;
    KbStats stats = Stats();
    w.U64(stats.n_pages);
    w.U64(stats.n_anchors);
    w.U64(stats.n_edges);
    w.F64(stats.avg_senses_per_anchor);
    w.F64(stats.avg_in_degree);
    w.Flush(out);
  }
  if (!out) throw KbError("write failure on index file: " + path);
}

KnowledgeBase KnowledgeBase::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw KbError("cannot open index file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw KbError("not a wikitag index (bad magic bytes): " + path);
  }
  {
    SectionReader r(in, "header");
    std::uint16_t major = r.U16();
    std::uint16_t minor = r.U16();
    if (major != kFormatMajor) {
      throw KbError("index format version " + std::to_string(major) + "." +
                    std::to_string(minor) + " not supported (expected " +
                    std::to_string(kFormatMajor) + ".x)");
    }
  }
  Catalog catalog;
  {
    SectionReader r(in, "catalog");
    std::uint32_t n = r.U32();
    for (std::uint32_t i = 0; i < n; ++i) {
      PageRecord rec;
      rec.id = r.I32();
      rec.title = r.Str();
      catalog.Add(std::move(rec));
    }
  }
  AnchorDictionary dict;
  {
    SectionReader r(in, "dictionary");
    std::uint32_t n = r.U32();
    for (std::uint32_t i = 0; i < n; ++i) {
      AnchorEntry e;
      e.text = r.Str();
      e.freq = r.U64();
      e.link = r.U64();
      e.lp = static_cast<double>(e.link) / static_cast<double>(e.freq);
      std::uint32_t ns = r.U32();
      e.senses.reserve(ns);
      for (std::uint32_t k = 0; k < ns; ++k) {
        SenseCandidate s;
        s.page = r.I32();
        s.link_count = r.U32();
        s.commonness =
            static_cast<double>(s.link_count) / static_cast<double>(e.link);
        e.senses.push_back(s);
      }
      dict.emplace(e.text, std::move(e));
    }
  }
  InLinkGraph graph;
  {
    SectionReader r(in, "graph");
    graph.SetPageCount(r.U32());
    std::uint32_t n = r.U32();
    for (std::uint32_t i = 0; i < n; ++i) {
      PageId page = r.I32();
      std::uint64_t count = r.Varint();
      std::vector<PageId> list;
      list.reserve(count);
      PageId prev = 0;
      for (std::uint64_t k = 0; k < count; ++k) {
        prev += static_cast<PageId>(r.Varint());
        list.push_back(prev);
      }
      graph.SetInLinks(page, std::move(list));
    }
  }
  {
    SectionReader r(in, "stats");  // validated by checksum, values recomputed
  }
  return KnowledgeBase(std::move(catalog), std::move(dict), std::move(graph));
}

}  // namespace wikitag
