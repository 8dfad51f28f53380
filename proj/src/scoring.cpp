#include "wikitag/scoring.hpp"

#include <algorithm>
#include <cmath>

namespace wikitag {

namespace {

std::uint64_t PairKey(PageId a, PageId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

std::size_t IntersectionSize(const std::vector<PageId>& a,
                             const std::vector<PageId>& b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

}  // namespace

double RelatednessScorer::Compute(PageId a, PageId b) const {
  const bool similarity = config_.mode == RelatednessMode::kSimilarity;
  if (a == b) return similarity ? 1.0 : 0.0;

  const std::vector<PageId>& in_a = kb_.graph().InLinks(a);
  const std::vector<PageId>& in_b = kb_.graph().InLinks(b);
  if (in_a.empty() || in_b.empty()) return similarity ? 0.0 : 1.0;

  const std::size_t inter = IntersectionSize(in_a, in_b);
  if (inter == 0) return similarity ? 0.0 : 1.0;

  const double na = static_cast<double>(in_a.size());
  const double nb = static_cast<double>(in_b.size());
  const double w = static_cast<double>(kb_.graph().page_count());
  const double denom = std::log(w) - std::log(std::min(na, nb));
  if (denom <= 0.0) return similarity ? 0.0 : 1.0;

  const double d =
      (std::log(std::max(na, nb)) - std::log(static_cast<double>(inter))) /
      denom;
  if (similarity) return std::clamp(1.0 - d, 0.0, 1.0);
  return std::clamp(d, 0.0, 1.0);
}

double RelatednessScorer::Relatedness(PageId a, PageId b) const {
  if (!kb_.catalog().Find(a)) {
    throw KbError("relatedness of unknown page " + std::to_string(a));
  }
  if (!kb_.catalog().Find(b)) {
    throw KbError("relatedness of unknown page " + std::to_string(b));
  }
  calls_.fetch_add(1, std::memory_order_relaxed);
  if (!config_.use_cache) {
    computations_.fetch_add(1, std::memory_order_relaxed);
    return Compute(a, b);
  }
  const std::uint64_t key = PairKey(a, b);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  computations_.fetch_add(1, std::memory_order_relaxed);
  const double value = Compute(a, b);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (cache_.size() >= config_.cache_capacity) cache_.clear();
    cache_.emplace(key, value);
  }
  return value;
}

double Vote(const std::vector<SenseCandidate>& voter_senses, PageId target,
            const RelatednessScorer& scorer) {
  if (voter_senses.empty()) return 0.0;
  double sum = 0.0;
  for (const SenseCandidate& s : voter_senses) {
    sum += scorer.Relatedness(s.page, target) * s.commonness;
  }
  return sum / static_cast<double>(voter_senses.size());
}

double TotalScore(const std::vector<const std::vector<SenseCandidate>*>& voters,
                  PageId target, const RelatednessScorer& scorer) {
  double total = 0.0;
  for (const auto* senses : voters) total += Vote(*senses, target, scorer);
  return total;
}

double Coherence(PageId sense, const std::vector<PageId>& assigned_senses,
                 const RelatednessScorer& scorer) {
  std::vector<PageId> others;
  for (PageId p : assigned_senses) {
    if (p == sense || p == kNoAnnotation) continue;
    if (std::find(others.begin(), others.end(), p) == others.end()) {
      others.push_back(p);
    }
  }
  if (others.empty()) return 0.0;
  double sum = 0.0;
  for (PageId p : others) sum += scorer.Relatedness(p, sense);
  return sum / static_cast<double>(others.size());
}

}  // namespace wikitag
