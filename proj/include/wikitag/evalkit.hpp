#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wikitag/pipeline.hpp"

namespace wikitag {

struct DisambCase {
  std::string text;            // ~30-word fragment
  std::size_t target_begin = 0;  // char span of the target mention
  std::size_t target_end = 0;
  PageId gold = 0;
};

struct GoldAnnotation {
  std::size_t begin = 0;
  std::size_t end = 0;
  PageId page = 0;
};

struct AnnotCase {
  std::string text;
  std::vector<GoldAnnotation> gold;  // unlinked spotted anchors are NA
};

struct MetricFamily {
  std::uint64_t tp = 0;
  std::uint64_t system_total = 0;
  std::uint64_t gold_total = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

MetricFamily FinishMetric(std::uint64_t tp, std::uint64_t system_total,
                          std::uint64_t gold_total);

struct MetricReport {
  MetricFamily disamb;
  MetricFamily ann;
  MetricFamily topics;
  // Per-case averages, for inspection next to the pooled numbers.
  double macro_f_ann = 0.0;
  double macro_f_topics = 0.0;
};

// A page body with markup resolved to plain text plus gold link spans.
struct PlainPage {
  PageId id = 0;
  std::string text;
  std::vector<GoldAnnotation> links;      // spans in `text`
  std::vector<std::string> link_anchors;  // normalized anchor per link
};

PlainPage FlattenPage(const RawPage& page, const RedirectMap& titlemap);

// --- dataset generation (pure functions of corpus, kb, seed, params) -------

struct GenReport {
  std::size_t requested = 0;
  std::size_t emitted = 0;  // < requested when the corpus is exhausted
};

std::vector<DisambCase> GenDisamb(const std::vector<RawPage>& pages,
                                  const KnowledgeBase& kb, std::size_t n,
                                  std::size_t fragment_words,
                                  std::uint64_t seed,
                                  GenReport* report = nullptr);

std::vector<AnnotCase> GenAnnot(const std::vector<RawPage>& pages,
                                const KnowledgeBase& kb, std::size_t n,
                                std::size_t fragment_words, std::uint64_t seed,
                                GenReport* report = nullptr);

std::vector<AnnotCase> GenLong(const std::vector<RawPage>& pages,
                               const KnowledgeBase& kb, std::size_t n,
                               std::size_t min_links, std::uint64_t seed,
                               GenReport* report = nullptr);

// --- evaluation -------------------------------------------------------------

enum class DisambAlgo { kDt, kMc, kRandom };

struct DisambOutcome {
  bool attempted = false;  // a non-NA sense was returned
  bool correct = false;
  PageId picked = kNoAnnotation;
};

// Runs one algorithm on the target mention with full-fragment context.
DisambOutcome RunDisambCase(const DisambCase& c, const KnowledgeBase& kb,
                            const DisambConfig& cfg, DisambAlgo algo,
                            std::mt19937_64& rng);

MetricReport EvalDisamb(const std::vector<DisambCase>& cases,
                        const KnowledgeBase& kb, const DisambConfig& cfg,
                        DisambAlgo algo = DisambAlgo::kDt,
                        std::uint64_t rng_seed = 0);

// Fills the ann and topics families (and macro averages).
MetricReport EvalAnnot(const std::vector<AnnotCase>& cases,
                       const KnowledgeBase& kb, const PipelineConfig& cfg);

struct SweepRow {
  double rho_na = 0.0;
  std::uint64_t system_annotations = 0;
  MetricReport metrics;
};

// One pruning evaluation per grid point in [0,1]; the pipeline runs once and
// the grid thresholds the recorded rho values (pruning is single-pass).
std::vector<SweepRow> SweepRho(const std::vector<AnnotCase>& cases,
                               const KnowledgeBase& kb,
                               const PipelineConfig& cfg,
                               double step = 0.01);

void WriteSweepCsv(const std::vector<SweepRow>& rows, std::ostream& out);

// --- pruner training --------------------------------------------------------

// Runs DT over the dataset and labels each candidate annotation by the
// gold-agreement rule (match -> positive, mismatch -> discarded,
// not linked in gold -> negative).
std::vector<LrTrainingCase> BuildTrainingCases(
    const std::vector<AnnotCase>& cases, const KnowledgeBase& kb,
    const PipelineConfig& cfg);

// --- anchor coverage --------------------------------------------------------

struct CoverageStats {
  std::vector<std::size_t> anchors_per_fragment;  // one entry per fragment
  std::vector<double> max_lp;        // per fragment with >= 1 anchor
  std::vector<double> mean_top5_lp;  // per fragment with >= 1 anchor

  std::size_t HistogramBucket(std::size_t k) const;  // fragments with k anchors
  double FractionWithAtLeast(std::size_t k) const;
  static double Quantile(std::vector<double> values, double q);
};

CoverageStats ComputeCoverage(const std::vector<std::string>& fragments,
                              const KnowledgeBase& kb);

// --- dataset files (DATASET_FORMAT.md) --------------------------------------

void SaveDisambCases(const std::vector<DisambCase>& cases,
                     const std::string& path);
std::vector<DisambCase> LoadDisambCases(const std::string& path);
void SaveAnnotCases(const std::vector<AnnotCase>& cases,
                    const std::string& path);
std::vector<AnnotCase> LoadAnnotCases(const std::string& path);

}  // namespace wikitag
