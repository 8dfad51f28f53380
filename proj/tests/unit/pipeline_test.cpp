#include <sstream>

#include "doctest.h"
#include "testutil.hpp"
#include "wikitag/pipeline.hpp"

using namespace wikitag;

namespace {

// "mercury orbits the sun": the element sense has commonness 0.7 but no
// link overlap with the sun page; the planet sense has 0.3 and shares
// in-links with the sun.
KnowledgeBase MercuryKb() {
  std::vector<std::pair<PageId, std::string>> pages = {
      {1, "mercury planet"}, {2, "mercury element"}, {3, "sun"}};
  for (PageId i = 4; i <= 9; ++i) {
    pages.emplace_back(i, "src " + std::to_string(i));
  }
  std::map<PageId, std::vector<PageId>> in;
  in[1] = {4, 5, 6};
  in[3] = {4, 5, 7};
  in[2] = {8, 9};
  return testutil::MakeKb(
      pages,
      {testutil::MakeAnchor("mercury", 20, {{2, 7}, {1, 3}}),
       testutil::MakeAnchor("sun", 10, {{3, 5}})},
      in, 9);
}

// Entity-vs-noise fixture: two entity anchors with high lp and coherent
// senses; two function-word anchors with low lp and weak coherence.
KnowledgeBase EntityKb() {
  std::vector<std::pair<PageId, std::string>> pages = {
      {1, "footballer"}, {2, "country"},  {3, "national team"},
      {4, "win page"},   {5, "against page"}};
  for (PageId i = 6; i <= 16; ++i) {
    pages.emplace_back(i, "src " + std::to_string(i));
  }
  std::map<PageId, std::vector<PageId>> in;
  in[1] = {6, 7, 8, 9};
  in[3] = {6, 7, 10};
  in[2] = {11, 12, 13};
  in[4] = {6, 14};
  in[5] = {7, 15};
  return testutil::MakeKb(
      pages,
      {testutil::MakeAnchor("diego maradona", 10, {{1, 9}}),
       testutil::MakeAnchor("mexico", 20, {{2, 8}, {3, 2}}),
       testutil::MakeAnchor("won", 33, {{4, 2}}),
       testutil::MakeAnchor("against", 40, {{5, 2}})},
      in, 16);
}

const Annotation* FindByAnchor(const AnnotationResult& r,
                               const std::string& anchor) {
  for (const Annotation& a : r.annotations) {
    if (a.mention.anchor == anchor) return &a;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("no dictionary hits yields an empty annotation list") {
  KnowledgeBase kb = MercuryKb();
  PipelineConfig cfg;
  CHECK(AnnotateShort("nothing matches at all", kb, cfg).annotations.empty());
  CHECK(AnnotateShort("", kb, cfg).annotations.empty());
}

TEST_CASE("context votes pick the planet sense over the commoner element") {
  KnowledgeBase kb = MercuryKb();
  PipelineConfig cfg;
  AnnotationResult r = AnnotateShort("mercury orbits the sun", kb, cfg);
  REQUIRE(r.annotations.size() == 2);
  const Annotation* mercury = FindByAnchor(r, "mercury");
  const Annotation* sun = FindByAnchor(r, "sun");
  REQUIRE(mercury != nullptr);
  REQUIRE(sun != nullptr);
  CHECK(mercury->sense == 1);  // planet, not the 0.7-commonness element
  CHECK(sun->sense == 3);
  CHECK_FALSE(mercury->pruned);
  CHECK_FALSE(sun->pruned);
  CHECK(mercury->rel_score > 0.0);
  CHECK(mercury->coherence > 0.0);
  CHECK(mercury->rho > cfg.prune.rho_na);
  // Output ordered by character position.
  CHECK(r.annotations[0].mention.char_begin <=
        r.annotations[1].mention.char_begin);
}

TEST_CASE("entity spots survive pruning, function words do not") {
  KnowledgeBase kb = EntityKb();
  PipelineConfig cfg;
  AnnotationResult r =
      AnnotateShort("diego maradona won against mexico", kb, cfg);
  REQUIRE(r.annotations.size() == 4);

  const Annotation* maradona = FindByAnchor(r, "diego maradona");
  const Annotation* mexico = FindByAnchor(r, "mexico");
  const Annotation* won = FindByAnchor(r, "won");
  const Annotation* against = FindByAnchor(r, "against");
  REQUIRE(maradona != nullptr);
  REQUIRE(mexico != nullptr);
  REQUIRE(won != nullptr);
  REQUIRE(against != nullptr);

  CHECK(maradona->sense == 1);
  CHECK_FALSE(maradona->pruned);
  CHECK(mexico->sense == 3);  // national team: context beats commonness
  CHECK_FALSE(mexico->pruned);
  CHECK(won->pruned);
  CHECK(won->sense == kNoAnnotation);
  CHECK(against->pruned);
  CHECK(against->sense == kNoAnnotation);
}

TEST_CASE("every emitted non-NA sense belongs to its anchor's sense set") {
  KnowledgeBase kb = EntityKb();
  PipelineConfig cfg;
  cfg.prune.rho_na = 0.0;
  AnnotationResult r =
      AnnotateShort("diego maradona won against mexico won mexico", kb, cfg);
  for (const Annotation& a : r.annotations) {
    if (a.sense == kNoAnnotation) continue;
    const AnchorEntry* entry = kb.LookupAnchor(a.mention.anchor);
    REQUIRE(entry != nullptr);
    bool member = false;
    for (const SenseCandidate& s : entry->senses) member |= (s.page == a.sense);
    CHECK(member);
  }
}

TEST_CASE("determinism: identical input and config give identical output") {
  KnowledgeBase kb = EntityKb();
  PipelineConfig cfg;
  auto r1 = AnnotateShort("diego maradona won against mexico", kb, cfg);
  auto r2 = AnnotateShort("diego maradona won against mexico", kb, cfg);
  REQUIRE(r1.annotations.size() == r2.annotations.size());
  for (std::size_t i = 0; i < r1.annotations.size(); ++i) {
    CHECK(r1.annotations[i].sense == r2.annotations[i].sense);
    CHECK(r1.annotations[i].rho == r2.annotations[i].rho);
    CHECK(r1.annotations[i].coherence == r2.annotations[i].coherence);
    CHECK(r1.annotations[i].rel_score == r2.annotations[i].rel_score);
  }
}

namespace {

// Many-mention fixture for the windowed path: repeated ambiguous anchors in
// two relatedness clusters.
KnowledgeBase WindowKb() {
  std::vector<std::pair<PageId, std::string>> pages;
  for (PageId i = 1; i <= 30; ++i) {
    pages.emplace_back(i, "wp " + std::to_string(i));
  }
  std::map<PageId, std::vector<PageId>> in;
  // Cluster A: pages 1..5 share sources 21..24; cluster B: 11..15 share 25..28.
  for (PageId p = 1; p <= 5; ++p) {
    in[p] = p <= 3 ? std::vector<PageId>{21, 22, 23}
                   : std::vector<PageId>{21, 22, 23, 24};
  }
  for (PageId p = 11; p <= 15; ++p) {
    in[p] = p <= 13 ? std::vector<PageId>{25, 26, 27}
                    : std::vector<PageId>{25, 26, 27, 28};
  }
  std::vector<AnchorEntry> anchors;
  for (int k = 0; k < 5; ++k) {
    anchors.push_back(testutil::MakeAnchor(
        "term" + std::to_string(k) + "x",  10,
        {{static_cast<PageId>(k + 1), 3}, {static_cast<PageId>(k + 11), 2}}));
  }
  return testutil::MakeKb(pages, std::move(anchors), in, 30);
}

std::string RepeatedMentionText(int count) {
  std::ostringstream out;
  for (int i = 0; i < count; ++i) out << "term" << (i % 5) << "x ";
  return out.str();
}

}  // namespace

TEST_CASE("auto dispatch honours the mention-count threshold") {
  KnowledgeBase kb = WindowKb();
  PipelineConfig cfg;  // threshold 11
  CHECK_FALSE(AnnotateAuto(RepeatedMentionText(5), kb, cfg).windowed);
  CHECK_FALSE(AnnotateAuto(RepeatedMentionText(11), kb, cfg).windowed);  // ==
  CHECK(AnnotateAuto(RepeatedMentionText(12), kb, cfg).windowed);
  CHECK(AnnotateAuto(RepeatedMentionText(200), kb, cfg).windowed);
}

TEST_CASE("long path equals short path when mentions fit one window") {
  KnowledgeBase kb = WindowKb();
  PipelineConfig cfg;
  for (int count : {1, 2, 5, 9, 10}) {
    std::string text = RepeatedMentionText(count);
    auto s = AnnotateShort(text, kb, cfg);
    auto l = AnnotateLong(text, kb, cfg);
    REQUIRE(s.annotations.size() == l.annotations.size());
    for (std::size_t i = 0; i < s.annotations.size(); ++i) {
      CHECK(s.annotations[i].sense == l.annotations[i].sense);
      CHECK(s.annotations[i].rho == l.annotations[i].rho);
      CHECK(s.annotations[i].coherence == l.annotations[i].coherence);
      CHECK(s.annotations[i].pruned == l.annotations[i].pruned);
    }
  }
}

TEST_CASE("windowed decisions match a per-window oracle") {
  KnowledgeBase kb = WindowKb();
  PipelineConfig cfg;
  cfg.prune.rho_na = 0.0;  // keep raw senses observable
  std::string text = RepeatedMentionText(30);

  AnnotationResult got = AnnotateLong(text, kb, cfg);
  auto mentions = Spot(text, kb);
  REQUIRE(got.annotations.size() == mentions.size());
  REQUIRE(mentions.size() == 30);

  RelatednessScorer scorer(kb);
  const std::size_t w = cfg.window_anchors;
  const std::size_t n = mentions.size();
  for (std::size_t i = 0; i < n; ++i) {
    // Centered window: floor(w/2) before, remainder after, clipped.
    std::size_t begin = i > w / 2 ? i - w / 2 : 0;
    std::size_t end = begin + w;
    if (end > n) {
      end = n;
      begin = end > w ? end - w : 0;
    }
    std::vector<std::vector<SenseScore>> window;
    for (std::size_t k = begin; k < end; ++k) {
      const AnchorEntry* e = kb.LookupAnchor(mentions[k].anchor);
      REQUIRE(e != nullptr);
      window.push_back(CandidateSenses(*e, cfg.disamb.tau));
    }
    PageId expect = DisambiguateDt(i - begin, window, scorer, cfg.disamb);
    CHECK(got.annotations[i].sense == expect);
  }

  // Spec example: with w=10, the 15th mention's voters are mentions 10..19
  // (1-based), i.e. indices 9..18 around index 14.
  std::size_t i = 14;
  std::size_t begin = i - cfg.window_anchors / 2;
  CHECK(begin == 9);
  CHECK(begin + cfg.window_anchors == 19);
}
