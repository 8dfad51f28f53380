#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wikitag/disambiguation.hpp"
#include "wikitag/kb.hpp"

namespace wikitag::testutil {

// --- hand-built KBs ----------------------------------------------------------

inline AnchorEntry MakeAnchor(std::string text, std::uint64_t freq,
                              std::vector<std::pair<PageId, std::uint32_t>>
                                  sense_links) {
  AnchorEntry entry;
  entry.text = std::move(text);
  entry.freq = freq;
  for (const auto& [page, n] : sense_links) {
    entry.link += n;
    entry.senses.push_back(SenseCandidate{page, n, 0.0});
  }
  for (SenseCandidate& s : entry.senses) {
    s.commonness =
        static_cast<double>(s.link_count) / static_cast<double>(entry.link);
  }
  std::sort(entry.senses.begin(), entry.senses.end(),
            [](const SenseCandidate& a, const SenseCandidate& b) {
              if (a.commonness != b.commonness) return a.commonness > b.commonness;
              return a.page < b.page;
            });
  entry.lp = static_cast<double>(entry.link) / static_cast<double>(entry.freq);
  return entry;
}

inline KnowledgeBase MakeKb(
    const std::vector<std::pair<PageId, std::string>>& pages,
    std::vector<AnchorEntry> anchors,
    const std::map<PageId, std::vector<PageId>>& in_links,
    std::uint32_t page_count = 0) {
  Catalog catalog;
  for (const auto& [id, title] : pages) catalog.Add(PageRecord{id, title});
  AnchorDictionary dict;
  for (AnchorEntry& e : anchors) {
    std::string key = e.text;
    dict.emplace(std::move(key), std::move(e));
  }
  InLinkGraph graph;
  graph.SetPageCount(page_count ? page_count
                                : static_cast<std::uint32_t>(pages.size()));
  for (const auto& [page, sources] : in_links) {
    graph.SetInLinks(page, sources);
  }
  return KnowledgeBase(std::move(catalog), std::move(dict), std::move(graph));
}

// --- independent oracles ------------------------------------------------------

// Brute-force relatedness: explicit set intersection plus the normalized
// link-distance formula, written independently of RelatednessScorer.
inline double OracleRelatedness(const KnowledgeBase& kb, PageId a, PageId b) {
  if (a == b) return 1.0;
  std::set<PageId> in_a(kb.graph().InLinks(a).begin(),
                        kb.graph().InLinks(a).end());
  std::set<PageId> in_b(kb.graph().InLinks(b).begin(),
                        kb.graph().InLinks(b).end());
  if (in_a.empty() || in_b.empty()) return 0.0;
  std::size_t inter = 0;
  for (PageId p : in_a) inter += in_b.count(p);
  if (inter == 0) return 0.0;
  double lo = static_cast<double>(std::min(in_a.size(), in_b.size()));
  double hi = static_cast<double>(std::max(in_a.size(), in_b.size()));
  double w = kb.graph().page_count();
  double denom = std::log(w) - std::log(lo);
  if (denom <= 0.0) return 0.0;
  double d = (std::log(hi) - std::log(static_cast<double>(inter))) / denom;
  return std::min(1.0, std::max(0.0, 1.0 - d));
}

// Naive enumerator of the threshold rule: keep senses with
// rel_a >= (1-eps)*best, then take max commonness with the stated tie-breaks.
inline PageId OracleThresholdPick(std::vector<SenseScore> scored, double eps) {
  if (scored.empty()) return kNoAnnotation;
  double best = 0.0;
  for (const auto& s : scored) best = std::max(best, s.rel_score);
  if (best == 0.0) return kNoAnnotation;
  std::vector<SenseScore> top;
  for (const auto& s : scored) {
    if (s.rel_score >= (1.0 - eps) * best) top.push_back(s);
  }
  std::sort(top.begin(), top.end(), [](const SenseScore& a, const SenseScore& b) {
    if (a.commonness != b.commonness) return a.commonness > b.commonness;
    if (a.rel_score != b.rel_score) return a.rel_score > b.rel_score;
    return a.page < b.page;
  });
  return top.front().page;
}

// --- random toy corpora -------------------------------------------------------

inline const std::vector<std::string>& Vocab() {
  static const std::vector<std::string> words = {
      "alder", "brook", "cedar", "delta",  "ember", "fjord", "grove",
      "heron", "inlet", "juno",  "krill",  "lumen", "maple", "noria",
      "osier", "pike",  "quart", "ridge",  "sable", "tarn",  "umber",
      "vale",  "wharf", "xylem", "yarrow", "zephyr"};
  return words;
}

// A small corpus with random articles, redirects, disambiguation and list
// pages, random link markup and enough anchor repetition to survive the
// dictionary filters.
inline std::vector<RawPage> RandomToyCorpus(std::mt19937_64& rng) {
  const auto& vocab = Vocab();
  std::uniform_int_distribution<std::size_t> word(0, vocab.size() - 1);
  std::uniform_int_distribution<int> articles_dist(6, 14);
  const int n_articles = articles_dist(rng);

  std::vector<RawPage> pages;
  std::vector<std::string> titles;
  for (int i = 0; i < n_articles; ++i) {
    RawPage p;
    p.id = i + 1;
    p.title = vocab[word(rng)] + " " + vocab[word(rng)] + " " +
              std::to_string(i + 1) + "x";
    p.kind = PageKind::kArticle;
    titles.push_back(p.title);
    pages.push_back(std::move(p));
  }
  // A couple of redirects and one disambiguation page.
  std::uniform_int_distribution<int> article_pick(0, n_articles - 1);
  for (int r = 0; r < 2; ++r) {
    RawPage p;
    p.id = 100 + r;
    p.title = std::string("redir ") + vocab[word(rng)] + std::to_string(r) + "r";
    p.kind = PageKind::kRedirect;
    p.redirect_to = titles[static_cast<std::size_t>(article_pick(rng))];
    pages.push_back(std::move(p));
  }
  {
    RawPage p;
    p.id = 200;
    p.title = "things (disambiguation)";
    p.kind = PageKind::kDisambiguation;
    pages.push_back(std::move(p));
  }

  // Shared anchor pool so link(a) >= 2 happens naturally.
  std::vector<std::string> anchor_pool;
  for (int i = 0; i < 5; ++i) {
    anchor_pool.push_back(vocab[word(rng)] + " " + vocab[word(rng)]);
  }
  std::uniform_int_distribution<std::size_t> anchor_pick(0, anchor_pool.size() - 1);
  std::uniform_int_distribution<int> links_dist(2, 6);
  std::uniform_int_distribution<int> filler_dist(3, 10);

  for (RawPage& p : pages) {
    if (p.kind != PageKind::kArticle) continue;
    std::ostringstream body;
    const int n_links = links_dist(rng);
    for (int l = 0; l < n_links; ++l) {
      const int f = filler_dist(rng);
      for (int k = 0; k < f; ++k) body << vocab[word(rng)] << " ";
      const std::string& target = titles[static_cast<std::size_t>(article_pick(rng))];
      if (word(rng) % 2 == 0) {
        body << "[[" << target << "|" << anchor_pool[anchor_pick(rng)] << "]] ";
      } else {
        body << "[[" << target << "]] ";
      }
    }
    for (int k = 0; k < filler_dist(rng); ++k) body << vocab[word(rng)] << " ";
    p.body = body.str();
  }
  return pages;
}

// --- synthetic clustered corpus ------------------------------------------------

struct ClusteredParams {
  std::size_t topics = 10;
  std::size_t pages_per_topic = 24;
  std::size_t ambiguous_anchors = 60;
  std::size_t senses_per_anchor = 3;
  std::size_t noise_anchors = 30;
  std::size_t intra_links_per_page = 8;
  std::size_t majority_links = 24;  // per ambiguous anchor
  std::size_t minority_links = 8;   // per minority sense
};

struct ClusteredCorpus {
  std::vector<RawPage> pages;
  std::vector<std::string> ambiguous;        // anchor texts
  std::vector<std::vector<PageId>> senses;   // per anchor, [majority, minors...]
};

inline std::string TopicWord(std::size_t t) {
  static const char* names[] = {"argon", "basil", "coral", "dune",  "elm",
                                "fern",  "gale",  "holly", "iris",  "jade",
                                "kelp",  "larch", "mica",  "nectar"};
  return names[t % (sizeof(names) / sizeof(names[0]))];
}

// Pages form dense in-link clusters per topic. Ambiguous anchors have one
// majority sense and several minority senses in other topics; each link to a
// sense is placed in a page of that sense's own topic, so the surrounding
// links agree with the gold sense. Noise anchors are linked rarely but
// mentioned often, giving them mid-range lp and off-topic senses.
inline ClusteredCorpus MakeClusteredCorpus(const ClusteredParams& params,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ClusteredCorpus out;
  const std::size_t T = params.topics;
  const std::size_t P = params.pages_per_topic;

  auto page_id = [&](std::size_t t, std::size_t j) {
    return static_cast<PageId>(t * P + j + 1);
  };
  auto page_title = [&](std::size_t t, std::size_t j) {
    return TopicWord(t) + std::string(" item ") + TopicWord(j) +
           std::to_string(t) + "v" + std::to_string(j);
  };

  // Ambiguous anchor plan: sense pages in distinct topics, majority first.
  std::uniform_int_distribution<std::size_t> topic_pick(0, T - 1);
  std::uniform_int_distribution<std::size_t> page_pick(0, P - 1);
  for (std::size_t k = 0; k < params.ambiguous_anchors; ++k) {
    out.ambiguous.push_back("amber" + std::to_string(k) + "z term");
    std::vector<std::size_t> sense_topics;
    while (sense_topics.size() < params.senses_per_anchor) {
      std::size_t t = topic_pick(rng);
      if (std::find(sense_topics.begin(), sense_topics.end(), t) ==
          sense_topics.end()) {
        sense_topics.push_back(t);
      }
    }
    std::vector<PageId> sense_pages;
    for (std::size_t t : sense_topics) {
      sense_pages.push_back(page_id(t, page_pick(rng)));
    }
    out.senses.push_back(sense_pages);
  }

  // Noise anchors: one sense in a random topic.
  std::vector<std::string> noise_texts;
  std::vector<PageId> noise_sense;
  for (std::size_t k = 0; k < params.noise_anchors; ++k) {
    noise_texts.push_back("nimbus" + std::to_string(k) + "q");
    noise_sense.push_back(page_id(topic_pick(rng), page_pick(rng)));
  }

  // Per-page link plans: majority sense linked from 6 pages of its topic,
  // each minority sense from 2 pages of its own topic.
  struct AmbLink {
    std::size_t anchor;
    PageId sense;
  };
  std::map<std::pair<std::size_t, std::size_t>, std::vector<AmbLink>> amb_plan;
  auto place_links = [&](std::size_t anchor, PageId sense, std::size_t count) {
    // Recover the sense's topic from its id.
    std::size_t t = static_cast<std::size_t>(sense - 1) / P;
    for (std::size_t c = 0; c < count; ++c) {
      amb_plan[{t, page_pick(rng)}].push_back(AmbLink{anchor, sense});
    }
  };
  for (std::size_t k = 0; k < out.ambiguous.size(); ++k) {
    place_links(k, out.senses[k][0], params.majority_links);
    for (std::size_t s = 1; s < out.senses[k].size(); ++s) {
      place_links(k, out.senses[k][s], params.minority_links);
    }
  }

  // Noise anchors get a varying number of in-topic links; their many
  // unlinked mentions elsewhere push lp into the 0.15..0.45 band.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>>
      noise_link_plan;
  for (std::size_t k = 0; k < noise_texts.size(); ++k) {
    std::size_t t = static_cast<std::size_t>(noise_sense[k] - 1) / P;
    std::size_t n_links = 6 + k % 20;
    for (std::size_t c = 0; c < n_links; ++c) {
      noise_link_plan[{t, page_pick(rng)}].push_back(k);
    }
  }

  // Alias anchors: a second, low-lp anchor per page in the first topics.
  // Linked a few times from same-topic pages, mentioned unlinked in random
  // pages, so lp lands inside the noise band while the linked occurrences
  // are genuinely good annotations.
  struct Alias {
    std::string text;
    PageId sense;
  };
  std::vector<Alias> aliases;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>>
      alias_link_plan;
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t j = 0; j < P; j += 3) {
      std::size_t k = aliases.size();
      aliases.push_back(Alias{"vista" + std::to_string(t) + "u" +
                                  std::to_string(j) + " sign",
                              page_id(t, j)});
      for (int c = 0; c < 4; ++c) {
        alias_link_plan[{t, page_pick(rng)}].push_back(k);
      }
    }
  }

  std::uniform_int_distribution<std::size_t> noise_pick(0, noise_texts.size() - 1);
  const auto& vocab = Vocab();
  std::uniform_int_distribution<std::size_t> word(0, vocab.size() - 1);

  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t j = 0; j < P; ++j) {
      RawPage page;
      page.id = page_id(t, j);
      page.title = page_title(t, j);
      page.kind = PageKind::kArticle;

      std::ostringstream body;
      auto filler = [&](int n) {
        for (int k = 0; k < n; ++k) body << vocab[word(rng)] << " ";
      };
      // Dense intra-topic links.
      for (std::size_t l = 0; l < params.intra_links_per_page; ++l) {
        std::size_t target = page_pick(rng);
        if (target == j) target = (target + 1) % P;
        filler(2);
        body << "[[" << page_title(t, target) << "]] ";
      }
      // Occasional cross-topic link.
      if (rng() % 4 == 0) {
        std::size_t t2 = topic_pick(rng);
        if (t2 != t) body << "[[" << page_title(t2, page_pick(rng)) << "]] ";
      }
      // Planned ambiguous-anchor links.
      if (auto it = amb_plan.find({t, j}); it != amb_plan.end()) {
        for (const AmbLink& link : it->second) {
          filler(2);
          body << "[[" << page_title(static_cast<std::size_t>(link.sense - 1) / P,
                                     static_cast<std::size_t>(link.sense - 1) % P)
               << "|" << out.ambiguous[link.anchor] << "]] ";
        }
      }
      // Planned noise links (rare) and frequent unlinked noise mentions.
      if (auto it = noise_link_plan.find({t, j}); it != noise_link_plan.end()) {
        for (std::size_t k : it->second) {
          std::size_t nt = static_cast<std::size_t>(noise_sense[k] - 1) / P;
          std::size_t nj = static_cast<std::size_t>(noise_sense[k] - 1) % P;
          body << "[[" << page_title(nt, nj) << "|" << noise_texts[k] << "]] ";
        }
      }
      for (int k = 0; k < 4; ++k) {
        body << noise_texts[noise_pick(rng)] << " ";
        filler(1);
      }
      // Alias links and scattered unlinked alias mentions.
      if (auto it = alias_link_plan.find({t, j}); it != alias_link_plan.end()) {
        for (std::size_t k : it->second) {
          const Alias& a = aliases[k];
          std::size_t at = static_cast<std::size_t>(a.sense - 1) / P;
          std::size_t aj = static_cast<std::size_t>(a.sense - 1) % P;
          filler(1);
          body << "[[" << page_title(at, aj) << "|" << a.text << "]] ";
        }
      }
      if (!aliases.empty()) {
        for (int k = 0; k < 2; ++k) {
          body << aliases[rng() % aliases.size()].text << " ";
          filler(1);
        }
      }
      // Unlinked mentions of same-topic titles pull title lp below 1.
      for (int k = 0; k < 3; ++k) {
        body << page_title(t, page_pick(rng)) << " ";
        filler(1);
      }
      filler(4);
      page.body = body.str();
      out.pages.push_back(std::move(page));
    }
  }
  return out;
}

}  // namespace wikitag::testutil
