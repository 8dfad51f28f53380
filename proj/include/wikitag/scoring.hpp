#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "wikitag/kb.hpp"

namespace wikitag {

enum class RelatednessMode {
  kSimilarity,  // clamp(1 - d, 0, 1); the scoring used by the annotator
  kDistance,    // raw normalized link distance d, kept for ablation
};

struct ScoringConfig {
  RelatednessMode mode = RelatednessMode::kSimilarity;
  bool use_cache = true;
  std::size_t cache_capacity = 1u << 20;  // pair entries
};

// Relatedness between catalog pages from in-link overlap, with a bounded
// symmetric memo. Safe for concurrent use; values are deterministic so
// insert races are benign.
class RelatednessScorer {
 public:
  RelatednessScorer(const KnowledgeBase& kb, ScoringConfig config = {})
      : kb_(kb), config_(config) {}

  // In [0,1] for similarity mode. 1 if a == b; 0 on empty intersection,
  // empty in-set, or non-positive denominator. Throws KbError if either page
  // is missing from the catalog.
  double Relatedness(PageId a, PageId b) const;

  std::uint64_t Computations() const { return computations_.load(); }
  std::uint64_t Calls() const { return calls_.load(); }
  void ResetCounters() {
    computations_.store(0);
    calls_.store(0);
  }

 private:
  double Compute(PageId a, PageId b) const;

  const KnowledgeBase& kb_;
  ScoringConfig config_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::uint64_t, double> cache_;
  mutable std::atomic<std::uint64_t> computations_{0};
  mutable std::atomic<std::uint64_t> calls_{0};
};

// Commonness-weighted average relatedness of a voter's senses to `target`,
// divided by the voter's sense count. Empty sense list -> 0.
double Vote(const std::vector<SenseCandidate>& voter_senses, PageId target,
            const RelatednessScorer& scorer);

// Sum of votes by all voters (the total disambiguation score of a sense).
double TotalScore(const std::vector<const std::vector<SenseCandidate>*>& voters,
                  PageId target, const RelatednessScorer& scorer);

// Average relatedness of `sense` to the other distinct assigned senses.
// Fewer than one other sense -> 0.
double Coherence(PageId sense, const std::vector<PageId>& assigned_senses,
                 const RelatednessScorer& scorer);

}  // namespace wikitag
