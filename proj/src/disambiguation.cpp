#include "wikitag/disambiguation.hpp"

#include <algorithm>

namespace wikitag {

std::vector<SenseScore> CandidateSenses(const AnchorEntry& anchor, double tau) {
  std::vector<SenseScore> out;
  out.reserve(anchor.senses.size());
  for (const SenseCandidate& s : anchor.senses) {
    if (s.commonness < tau) continue;
    out.push_back(SenseScore{s.page, s.commonness, 0.0});
  }
  return out;
}

PageId PickByThreshold(const std::vector<SenseScore>& scored, double epsilon) {
  if (scored.empty()) return kNoAnnotation;
  double best = 0.0;
  for (const SenseScore& s : scored) best = std::max(best, s.rel_score);
  if (best == 0.0) return kNoAnnotation;

  const double cut = (1.0 - epsilon) * best;
  const SenseScore* pick = nullptr;
  for (const SenseScore& s : scored) {
    if (s.rel_score < cut) continue;
    if (!pick || s.commonness > pick->commonness ||
        (s.commonness == pick->commonness &&
         (s.rel_score > pick->rel_score ||
          (s.rel_score == pick->rel_score && s.page < pick->page)))) {
      pick = &s;
    }
  }
  return pick ? pick->page : kNoAnnotation;
}

PageId DisambiguateDt(std::size_t target,
                      const std::vector<std::vector<SenseScore>>& voter_senses,
                      const RelatednessScorer& scorer, const DisambConfig& cfg,
                      std::vector<SenseScore>* scored_out) {
  std::vector<SenseScore> scored = voter_senses[target];
  for (SenseScore& candidate : scored) {
    double total = 0.0;
    for (std::size_t b = 0; b < voter_senses.size(); ++b) {
      if (b == target || voter_senses[b].empty()) continue;
      double vote = 0.0;
      for (const SenseScore& s : voter_senses[b]) {
        vote += scorer.Relatedness(s.page, candidate.page) * s.commonness;
      }
      total += vote / static_cast<double>(voter_senses[b].size());
    }
    candidate.rel_score = total;
  }
  if (scored_out) *scored_out = scored;

  PageId pick = PickByThreshold(scored, cfg.epsilon);
  if (pick == kNoAnnotation && cfg.single_anchor_fallback &&
      voter_senses.size() == 1 && !scored.empty()) {
    // One-anchor texts have rel_a identically zero; fall back to commonness.
    const SenseScore* best = &scored[0];
    for (const SenseScore& s : scored) {
      if (s.commonness > best->commonness ||
          (s.commonness == best->commonness && s.page < best->page)) {
        best = &s;
      }
    }
    return best->page;
  }
  return pick;
}

PageId DisambiguateMc(const AnchorEntry& anchor) {
  const SenseCandidate* best = nullptr;
  for (const SenseCandidate& s : anchor.senses) {
    if (!best || s.commonness > best->commonness ||
        (s.commonness == best->commonness && s.page < best->page)) {
      best = &s;
    }
  }
  return best ? best->page : kNoAnnotation;
}

PageId DisambiguateRandom(const AnchorEntry& anchor, std::mt19937_64& rng) {
  if (anchor.senses.empty()) return kNoAnnotation;
  std::uniform_int_distribution<std::size_t> pick(0, anchor.senses.size() - 1);
  return anchor.senses[pick(rng)].page;
}

}  // namespace wikitag
