#pragma once

#include <string_view>
#include <vector>

#include "wikitag/disambiguation.hpp"
#include "wikitag/kb.hpp"
#include "wikitag/pruning.hpp"
#include "wikitag/scoring.hpp"
#include "wikitag/spotter.hpp"

namespace wikitag {

struct Annotation {
  SpotMention mention;
  PageId sense = kNoAnnotation;
  double rel_score = 0.0;
  double lp = 0.0;
  double coherence = 0.0;
  double rho = 0.0;
  bool pruned = false;  // true when the pruner set sense to NA
};

struct PipelineConfig {
  DisambConfig disamb;
  PruneConfig prune;
  std::size_t window_anchors = 10;      // w
  std::size_t long_text_threshold = 11; // windowing above this mention count
  ScoringConfig scoring;
};

struct AnnotationResult {
  std::vector<Annotation> annotations;  // ordered by character position
  bool windowed = false;
  std::uint64_t rel_computations = 0;
  std::size_t mention_count = 0;
};

AnnotationResult AnnotateShort(std::string_view text, const KnowledgeBase& kb,
                               const PipelineConfig& cfg);

// Mentions detected once over the whole text; each mention is decided exactly
// once against the window of the w nearest mentions centered on it.
AnnotationResult AnnotateLong(std::string_view text, const KnowledgeBase& kb,
                              const PipelineConfig& cfg);

// Short path when mention count <= long_text_threshold, long path otherwise.
AnnotationResult AnnotateAuto(std::string_view text, const KnowledgeBase& kb,
                              const PipelineConfig& cfg);

}  // namespace wikitag
