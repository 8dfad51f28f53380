#include "wikitag/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "json.hpp"
#include "wikitag/text.hpp"

namespace wikitag {

using nlohmann::json;

MetricFamily FinishMetric(std::uint64_t tp, std::uint64_t system_total,
                          std::uint64_t gold_total) {
  MetricFamily m;
  m.tp = tp;
  m.system_total = system_total;
  m.gold_total = gold_total;
  m.precision = system_total > 0
                    ? static_cast<double>(tp) / static_cast<double>(system_total)
                    : 0.0;
  m.recall = gold_total > 0
                 ? static_cast<double>(tp) / static_cast<double>(gold_total)
                 : 0.0;
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

PlainPage FlattenPage(const RawPage& page, const RedirectMap& titlemap) {
  PlainPage out;
  out.id = page.id;
  const std::string& body = page.body;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t open = body.find("[[", pos);
    if (open == std::string::npos) {
      out.text.append(body.substr(pos));
      break;
    }
    std::size_t close = body.find("]]", open + 2);
    if (close == std::string::npos) {
      out.text.append(body.substr(pos));
      break;
    }
    out.text.append(body.substr(pos, open - pos));
    std::string_view inner(body.data() + open + 2, close - open - 2);
    std::size_t bar = inner.find('|');
    std::string_view target =
        bar == std::string_view::npos ? inner : inner.substr(0, bar);
    std::string_view surface =
        bar == std::string_view::npos ? inner : inner.substr(bar + 1);
    const std::size_t begin = out.text.size();
    out.text.append(surface);
    auto it = titlemap.title_to_article.find(std::string(target));
    if (it != titlemap.title_to_article.end() && !surface.empty()) {
      out.links.push_back(GoldAnnotation{begin, out.text.size(), it->second});
      out.link_anchors.push_back(Normalize(surface));
    }
    pos = close + 2;
  }
  return out;
}

namespace {

struct Fragment {
  std::string text;
  std::size_t offset = 0;  // char offset into the plain page text
};

// Whole-word window [first, last) over `tokens`, extended so that no gold
// link span is split.
Fragment CutFragment(const PlainPage& page, const std::vector<Token>& tokens,
                     std::size_t first, std::size_t last) {
  std::size_t begin = tokens[first].char_begin;
  std::size_t end = tokens[last - 1].char_end;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const GoldAnnotation& link : page.links) {
      if (link.end <= begin || link.begin >= end) continue;  // outside
      if (link.begin < begin) {
        begin = link.begin;
        changed = true;
      }
      if (link.end > end) {
        end = link.end;
        changed = true;
      }
    }
  }
  return Fragment{page.text.substr(begin, end - begin), begin};
}

std::size_t TokenIndexAt(const std::vector<Token>& tokens, std::size_t pos) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].char_end > pos) return i;
  }
  return tokens.empty() ? 0 : tokens.size() - 1;
}

std::pair<std::size_t, std::size_t> CenteredWindow(std::size_t center,
                                                   std::size_t total,
                                                   std::size_t width) {
  const std::size_t half = width / 2;
  std::size_t first = center > half ? center - half : 0;
  std::size_t last = first + width;
  if (last > total) {
    last = total;
    first = last > width ? last - width : 0;
  }
  return {first, last};
}

bool Overlaps(std::size_t b1, std::size_t e1, std::size_t b2, std::size_t e2) {
  return b1 < e2 && b2 < e1;
}

// Scans the fragment left to right for non-overlapping occurrences of the
// anchor's word sequence.
std::vector<std::pair<std::size_t, std::size_t>> FindAnchorSpans(
    const std::vector<Token>& tokens, const std::string& anchor) {
  std::vector<std::string> words;
  {
    std::size_t pos = 0;
    while (pos < anchor.size()) {
      std::size_t space = anchor.find(' ', pos);
      if (space == std::string::npos) space = anchor.size();
      if (space > pos) words.push_back(anchor.substr(pos, space - pos));
      pos = space + 1;
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  if (words.empty()) return spans;
  std::size_t i = 0;
  while (i + words.size() <= tokens.size()) {
    bool match = true;
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (Normalize(tokens[i + k].surface) != words[k]) {
        match = false;
        break;
      }
    }
    if (match) {
      spans.emplace_back(tokens[i].char_begin,
                         tokens[i + words.size() - 1].char_end);
      i += words.size();
    } else {
      ++i;
    }
  }
  return spans;
}

}  // namespace

std::vector<DisambCase> GenDisamb(const std::vector<RawPage>& pages,
                                  const KnowledgeBase& kb, std::size_t n,
                                  std::size_t fragment_words,
                                  std::uint64_t seed, GenReport* report) {
  RedirectMap titlemap = ResolveRedirects(pages);

  struct Candidate {
    std::size_t page_index;
    std::size_t link_index;
  };
  std::vector<PlainPage> plains(pages.size());
  std::vector<Candidate> eligible;
  for (std::size_t pi = 0; pi < pages.size(); ++pi) {
    if (pages[pi].kind != PageKind::kArticle) continue;
    plains[pi] = FlattenPage(pages[pi], titlemap);
    for (std::size_t li = 0; li < plains[pi].links.size(); ++li) {
      const AnchorEntry* entry =
          kb.LookupAnchor(plains[pi].link_anchors[li]);
      if (!entry || entry->senses.size() <= 1) continue;  // must be ambiguous
      eligible.push_back(Candidate{pi, li});
    }
  }
  std::mt19937_64 rng(seed);
  std::shuffle(eligible.begin(), eligible.end(), rng);

  std::vector<DisambCase> cases;
  for (const Candidate& cand : eligible) {
    if (cases.size() >= n) break;
    const PlainPage& page = plains[cand.page_index];
    const GoldAnnotation& link = page.links[cand.link_index];
    std::vector<Token> tokens = Tokenize(page.text);
    if (tokens.empty()) continue;
    auto [first, last] = CenteredWindow(TokenIndexAt(tokens, link.begin),
                                        tokens.size(), fragment_words);
    Fragment frag = CutFragment(page, tokens, first, last);
    if (link.begin < frag.offset) continue;  // extension failed to cover
    DisambCase c;
    c.text = frag.text;
    c.target_begin = link.begin - frag.offset;
    c.target_end = link.end - frag.offset;
    c.gold = link.page;
    cases.push_back(std::move(c));
  }
  if (report) {
    report->requested = n;
    report->emitted = cases.size();
  }
  return cases;
}

namespace {

// Gold set for a fragment: links inside it plus the page-level expansion of
// every unambiguously-linked anchor to all its occurrences in the fragment.
std::vector<GoldAnnotation> FragmentGold(const PlainPage& page,
                                         const Fragment& frag,
                                         const KnowledgeBase& kb) {
  std::vector<GoldAnnotation> gold;
  const std::size_t frag_end = frag.offset + frag.text.size();
  for (const GoldAnnotation& link : page.links) {
    if (link.begin >= frag.offset && link.end <= frag_end) {
      gold.push_back(
          GoldAnnotation{link.begin - frag.offset, link.end - frag.offset,
                         link.page});
    }
  }

  // Anchor -> unique target over the whole page; conflicting anchors are
  // skipped (two different targets for the same text).
  std::map<std::string, std::set<PageId>> targets;
  for (std::size_t li = 0; li < page.links.size(); ++li) {
    targets[page.link_anchors[li]].insert(page.links[li].page);
  }
  std::vector<Token> tokens = Tokenize(frag.text);
  for (const auto& [anchor, pages_linked] : targets) {
    if (pages_linked.size() != 1) continue;
    if (!kb.LookupAnchor(anchor)) continue;
    const PageId target = *pages_linked.begin();
    for (const auto& [begin, end] : FindAnchorSpans(tokens, anchor)) {
      bool clashes = false;
      for (const GoldAnnotation& g : gold) {
        if (Overlaps(begin, end, g.begin, g.end)) {
          clashes = true;
          break;
        }
      }
      if (!clashes) gold.push_back(GoldAnnotation{begin, end, target});
    }
  }
  std::sort(gold.begin(), gold.end(),
            [](const GoldAnnotation& a, const GoldAnnotation& b) {
              return a.begin < b.begin;
            });
  return gold;
}

}  // namespace

std::vector<AnnotCase> GenAnnot(const std::vector<RawPage>& pages,
                                const KnowledgeBase& kb, std::size_t n,
                                std::size_t fragment_words, std::uint64_t seed,
                                GenReport* report) {
  RedirectMap titlemap = ResolveRedirects(pages);

  struct Window {
    std::size_t page_index;
    std::size_t first_token;
  };
  std::vector<PlainPage> plains(pages.size());
  std::vector<std::vector<Token>> token_lists(pages.size());
  std::vector<Window> windows;
  for (std::size_t pi = 0; pi < pages.size(); ++pi) {
    if (pages[pi].kind != PageKind::kArticle) continue;
    plains[pi] = FlattenPage(pages[pi], titlemap);
    token_lists[pi] = Tokenize(plains[pi].text);
    for (std::size_t t = 0; t < token_lists[pi].size(); t += fragment_words) {
      windows.push_back(Window{pi, t});
    }
  }
  std::mt19937_64 rng(seed);
  std::shuffle(windows.begin(), windows.end(), rng);

  std::vector<AnnotCase> cases;
  for (const Window& w : windows) {
    if (cases.size() >= n) break;
    const auto& tokens = token_lists[w.page_index];
    const std::size_t last =
        std::min(tokens.size(), w.first_token + fragment_words);
    Fragment frag = CutFragment(plains[w.page_index], tokens, w.first_token, last);
    AnnotCase c;
    c.gold = FragmentGold(plains[w.page_index], frag, kb);
    c.text = std::move(frag.text);
    cases.push_back(std::move(c));
  }
  if (report) {
    report->requested = n;
    report->emitted = cases.size();
  }
  return cases;
}

std::vector<AnnotCase> GenLong(const std::vector<RawPage>& pages,
                               const KnowledgeBase& kb, std::size_t n,
                               std::size_t min_links, std::uint64_t seed,
                               GenReport* report) {
  RedirectMap titlemap = ResolveRedirects(pages);
  std::vector<PlainPage> eligible;
  for (const RawPage& p : pages) {
    if (p.kind != PageKind::kArticle) continue;
    PlainPage plain = FlattenPage(p, titlemap);
    if (plain.links.size() < min_links) continue;
    eligible.push_back(std::move(plain));
  }
  std::mt19937_64 rng(seed);
  std::shuffle(eligible.begin(), eligible.end(), rng);

  std::vector<AnnotCase> cases;
  for (const PlainPage& page : eligible) {
    if (cases.size() >= n) break;
    Fragment frag{page.text, 0};
    AnnotCase c;
    c.gold = FragmentGold(page, frag, kb);
    c.text = page.text;
    cases.push_back(std::move(c));
  }
  if (report) {
    report->requested = n;
    report->emitted = cases.size();
  }
  return cases;
}

DisambOutcome RunDisambCase(const DisambCase& c, const KnowledgeBase& kb,
                            const DisambConfig& cfg, DisambAlgo algo,
                            std::mt19937_64& rng) {
  DisambOutcome out;
  std::vector<SpotMention> mentions = Spot(c.text, kb);
  std::size_t target = mentions.size();
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    if (mentions[i].char_begin == c.target_begin &&
        mentions[i].char_end == c.target_end) {
      target = i;
      break;
    }
  }
  if (target == mentions.size()) return out;  // target not spotted

  const AnchorEntry* entry = kb.LookupAnchor(mentions[target].anchor);
  if (!entry) return out;

  PageId picked = kNoAnnotation;
  switch (algo) {
    case DisambAlgo::kMc:
      picked = DisambiguateMc(*entry);
      break;
    case DisambAlgo::kRandom:
      picked = DisambiguateRandom(*entry, rng);
      break;
    case DisambAlgo::kDt: {
      RelatednessScorer scorer(kb);
      std::vector<std::vector<SenseScore>> candidates(mentions.size());
      for (std::size_t i = 0; i < mentions.size(); ++i) {
        const AnchorEntry* e = kb.LookupAnchor(mentions[i].anchor);
        if (e) candidates[i] = CandidateSenses(*e, cfg.tau);
      }
      picked = DisambiguateDt(target, candidates, scorer, cfg);
      break;
    }
  }
  out.picked = picked;
  out.attempted = picked != kNoAnnotation;
  out.correct = out.attempted && picked == c.gold;
  return out;
}

MetricReport EvalDisamb(const std::vector<DisambCase>& cases,
                        const KnowledgeBase& kb, const DisambConfig& cfg,
                        DisambAlgo algo, std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  std::uint64_t attempted = 0;
  std::uint64_t correct = 0;
  for (const DisambCase& c : cases) {
    DisambOutcome out = RunDisambCase(c, kb, cfg, algo, rng);
    if (out.attempted) ++attempted;
    if (out.correct) ++correct;
  }
  MetricReport report;
  report.disamb = FinishMetric(correct, attempted, cases.size());
  return report;
}

namespace {

struct CaseOutput {
  struct Entry {
    std::size_t begin, end;
    PageId page;
    double rho;
  };
  std::vector<Entry> system;  // non-NA candidate annotations with scores
  std::vector<GoldAnnotation> gold;
};

MetricReport PoolMetrics(const std::vector<CaseOutput>& outputs,
                         double rho_na, std::uint64_t* system_count) {
  std::uint64_t ann_tp = 0, ann_sys = 0, ann_gold = 0;
  std::uint64_t top_tp = 0, top_sys = 0, top_gold = 0;
  double macro_ann = 0.0, macro_top = 0.0;
  for (const CaseOutput& out : outputs) {
    std::uint64_t c_tp = 0, c_sys = 0;
    std::set<PageId> sys_pages, gold_pages;
    for (const auto& g : out.gold) gold_pages.insert(g.page);
    for (const auto& e : out.system) {
      if (e.rho < rho_na) continue;  // pruned at this grid point
      ++c_sys;
      sys_pages.insert(e.page);
      for (const auto& g : out.gold) {
        if (g.begin == e.begin && g.end == e.end && g.page == e.page) {
          ++c_tp;
          break;
        }
      }
    }
    std::uint64_t c_top_tp = 0;
    for (PageId p : sys_pages) c_top_tp += gold_pages.count(p);
    ann_tp += c_tp;
    ann_sys += c_sys;
    ann_gold += out.gold.size();
    top_tp += c_top_tp;
    top_sys += sys_pages.size();
    top_gold += gold_pages.size();
    macro_ann += FinishMetric(c_tp, c_sys, out.gold.size()).f1;
    macro_top += FinishMetric(c_top_tp, sys_pages.size(), gold_pages.size()).f1;
  }
  MetricReport report;
  report.ann = FinishMetric(ann_tp, ann_sys, ann_gold);
  report.topics = FinishMetric(top_tp, top_sys, top_gold);
  if (!outputs.empty()) {
    report.macro_f_ann = macro_ann / static_cast<double>(outputs.size());
    report.macro_f_topics = macro_top / static_cast<double>(outputs.size());
  }
  if (system_count) *system_count = ann_sys;
  return report;
}

std::vector<CaseOutput> RunAnnotCases(const std::vector<AnnotCase>& cases,
                                      const KnowledgeBase& kb,
                                      const PipelineConfig& cfg) {
  std::vector<CaseOutput> outputs;
  outputs.reserve(cases.size());
  // Keep every candidate annotation; the caller thresholds on rho.
  PipelineConfig keep_all = cfg;
  keep_all.prune.rho_na = -1e300;
  for (const AnnotCase& c : cases) {
    AnnotationResult result = AnnotateAuto(c.text, kb, keep_all);
    CaseOutput out;
    out.gold = c.gold;
    for (const Annotation& a : result.annotations) {
      if (a.sense == kNoAnnotation) continue;
      out.system.push_back(CaseOutput::Entry{a.mention.char_begin,
                                             a.mention.char_end, a.sense,
                                             a.rho});
    }
    outputs.push_back(std::move(out));
  }
  return outputs;
}

}  // namespace

MetricReport EvalAnnot(const std::vector<AnnotCase>& cases,
                       const KnowledgeBase& kb, const PipelineConfig& cfg) {
  std::vector<CaseOutput> outputs = RunAnnotCases(cases, kb, cfg);
  return PoolMetrics(outputs, cfg.prune.rho_na, nullptr);
}

std::vector<SweepRow> SweepRho(const std::vector<AnnotCase>& cases,
                               const KnowledgeBase& kb,
                               const PipelineConfig& cfg, double step) {
  std::vector<CaseOutput> outputs = RunAnnotCases(cases, kb, cfg);
  std::vector<SweepRow> rows;
  const int steps = static_cast<int>(std::lround(1.0 / step));
  for (int i = 0; i <= steps; ++i) {
    SweepRow row;
    row.rho_na = static_cast<double>(i) * step;
    row.metrics = PoolMetrics(outputs, row.rho_na, &row.system_annotations);
    rows.push_back(std::move(row));
  }
  return rows;
}

void WriteSweepCsv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "rho_na,system_annotations,p_ann,r_ann,f_ann,"
         "p_topics,r_topics,f_topics,macro_f_ann,macro_f_topics\n";
  for (const SweepRow& row : rows) {
    const MetricReport& m = row.metrics;
    out << row.rho_na << ',' << row.system_annotations << ','
        << m.ann.precision << ',' << m.ann.recall << ',' << m.ann.f1 << ','
        << m.topics.precision << ',' << m.topics.recall << ',' << m.topics.f1
        << ',' << m.macro_f_ann << ',' << m.macro_f_topics << '\n';
  }
}

std::vector<LrTrainingCase> BuildTrainingCases(
    const std::vector<AnnotCase>& cases, const KnowledgeBase& kb,
    const PipelineConfig& cfg) {
  PipelineConfig keep_all = cfg;
  keep_all.prune.rho_na = -1e300;
  std::vector<LrTrainingCase> training;
  for (const AnnotCase& c : cases) {
    AnnotationResult result = AnnotateAuto(c.text, kb, keep_all);
    for (const Annotation& a : result.annotations) {
      if (a.sense == kNoAnnotation) continue;
      const GoldAnnotation* gold = nullptr;
      for (const GoldAnnotation& g : c.gold) {
        if (g.begin == a.mention.char_begin && g.end == a.mention.char_end) {
          gold = &g;
          break;
        }
      }
      if (gold && gold->page != a.sense) continue;  // disagreement: discarded
      training.push_back(
          LrTrainingCase{a.lp, a.coherence, gold ? 1 : 0});
    }
  }
  return training;
}

std::size_t CoverageStats::HistogramBucket(std::size_t k) const {
  std::size_t count = 0;
  for (std::size_t c : anchors_per_fragment) count += (c == k);
  return count;
}

double CoverageStats::FractionWithAtLeast(std::size_t k) const {
  if (anchors_per_fragment.empty()) return 0.0;
  std::size_t count = 0;
  for (std::size_t c : anchors_per_fragment) count += (c >= k);
  return static_cast<double>(count) /
         static_cast<double>(anchors_per_fragment.size());
}

double CoverageStats::Quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

CoverageStats ComputeCoverage(const std::vector<std::string>& fragments,
                              const KnowledgeBase& kb) {
  CoverageStats stats;
  for (const std::string& text : fragments) {
    std::vector<SpotMention> mentions = Spot(text, kb);
    stats.anchors_per_fragment.push_back(mentions.size());
    if (mentions.empty()) continue;
    std::vector<double> lps;
    lps.reserve(mentions.size());
    for (const SpotMention& m : mentions) lps.push_back(m.lp);
    std::sort(lps.begin(), lps.end(), std::greater<>());
    stats.max_lp.push_back(lps.front());
    const std::size_t top = std::min<std::size_t>(5, lps.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < top; ++i) sum += lps[i];
    stats.mean_top5_lp.push_back(sum / static_cast<double>(top));
  }
  return stats;
}

// --- dataset files -----------------------------------------------------------

void SaveDisambCases(const std::vector<DisambCase>& cases,
                     const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw CorpusError("cannot write dataset file: " + path);
  for (const DisambCase& c : cases) {
    json j{{"text", c.text},
           {"target", {{"begin", c.target_begin}, {"end", c.target_end}}},
           {"gold", c.gold}};
    out << j.dump() << '\n';
  }
}

std::vector<DisambCase> LoadDisambCases(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot read dataset file: " + path);
  std::vector<DisambCase> cases;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    DisambCase c;
    c.text = j.at("text").get<std::string>();
    c.target_begin = j.at("target").at("begin").get<std::size_t>();
    c.target_end = j.at("target").at("end").get<std::size_t>();
    c.gold = j.at("gold").get<PageId>();
    cases.push_back(std::move(c));
  }
  return cases;
}

void SaveAnnotCases(const std::vector<AnnotCase>& cases,
                    const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw CorpusError("cannot write dataset file: " + path);
  for (const AnnotCase& c : cases) {
    json gold = json::array();
    for (const GoldAnnotation& g : c.gold) {
      gold.push_back({{"begin", g.begin}, {"end", g.end}, {"page", g.page}});
    }
    json j{{"text", c.text}, {"gold", gold}};
    out << j.dump() << '\n';
  }
}

std::vector<AnnotCase> LoadAnnotCases(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot read dataset file: " + path);
  std::vector<AnnotCase> cases;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    AnnotCase c;
    c.text = j.at("text").get<std::string>();
    for (const json& g : j.at("gold")) {
      c.gold.push_back(GoldAnnotation{g.at("begin").get<std::size_t>(),
                                      g.at("end").get<std::size_t>(),
                                      g.at("page").get<PageId>()});
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

}  // namespace wikitag
