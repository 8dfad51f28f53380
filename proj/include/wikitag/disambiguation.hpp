#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wikitag/kb.hpp"
#include "wikitag/scoring.hpp"

namespace wikitag {

struct DisambConfig {
  double tau = 0.02;      // commonness cutoff
  double epsilon = 0.30;  // top-set width
  bool single_anchor_fallback = false;
  std::uint64_t rng_seed = 0;  // baselines only
};

struct SenseScore {
  PageId page = 0;
  double commonness = 0.0;
  double rel_score = 0.0;  // total vote score rel_a
};

// Senses with commonness < tau removed (the same cut applies to voters).
std::vector<SenseScore> CandidateSenses(const AnchorEntry& anchor, double tau);

// The threshold rule on already-scored candidates: top set is
// { p : rel_a(p) >= (1 - epsilon) * best }, pick max commonness there
// (ties: larger rel_score, then smaller page id). All-zero scores -> NA.
PageId PickByThreshold(const std::vector<SenseScore>& scored, double epsilon);

// DT over the mentions of one text: rel_a for each tau-surviving sense of
// `target` is the sum of the other mentions' votes. `voter_senses[i]` holds
// the tau-filtered sense list of mention i.
PageId DisambiguateDt(std::size_t target,
                      const std::vector<std::vector<SenseScore>>& voter_senses,
                      const RelatednessScorer& scorer, const DisambConfig& cfg,
                      std::vector<SenseScore>* scored_out = nullptr);

// Most-common sense baseline (tie: smaller page id).
PageId DisambiguateMc(const AnchorEntry& anchor);

// Uniform choice over Pg(a); reproducible for a fixed generator state.
PageId DisambiguateRandom(const AnchorEntry& anchor, std::mt19937_64& rng);

}  // namespace wikitag
