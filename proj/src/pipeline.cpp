#include "wikitag/pipeline.hpp"

#include <algorithm>

namespace wikitag {

namespace {

// Window of the w nearest mentions centered on index i, clipped at the edges.
std::pair<std::size_t, std::size_t> Window(std::size_t i, std::size_t total,
                                           std::size_t w) {
  const std::size_t half = w / 2;
  std::size_t begin = i > half ? i - half : 0;
  std::size_t end = begin + w;
  if (end > total) {
    end = total;
    begin = end > w ? end - w : 0;
  }
  return {begin, end};
}

AnnotationResult Annotate(std::vector<SpotMention> mentions,
                          const KnowledgeBase& kb, const PipelineConfig& cfg,
                          bool windowed) {
  AnnotationResult result;
  result.windowed = windowed;
  result.mention_count = mentions.size();

  RelatednessScorer scorer(kb, cfg.scoring);
  const std::size_t n = mentions.size();
  const std::size_t w = windowed ? cfg.window_anchors : n;

  std::vector<std::vector<SenseScore>> candidates(n);
  for (std::size_t i = 0; i < n; ++i) {
    const AnchorEntry* entry = kb.LookupAnchor(mentions[i].anchor);
    if (entry) candidates[i] = CandidateSenses(*entry, cfg.disamb.tau);
  }

  // Disambiguation: each mention decided once against its voter window.
  std::vector<PageId> assigned(n, kNoAnnotation);
  std::vector<double> rel_scores(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto [begin, end] = Window(i, n, w);
    std::vector<std::vector<SenseScore>> window_senses(
        candidates.begin() + static_cast<std::ptrdiff_t>(begin),
        candidates.begin() + static_cast<std::ptrdiff_t>(end));
    std::vector<SenseScore> scored;
    PageId sense = DisambiguateDt(i - begin, window_senses, scorer, cfg.disamb,
                                  &scored);
    assigned[i] = sense;
    if (sense != kNoAnnotation) {
      for (const SenseScore& s : scored) {
        if (s.page == sense) {
          rel_scores[i] = s.rel_score;
          break;
        }
      }
    }
  }

  // Coherence features against the window's assignments, then pruning.
  result.annotations.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Annotation ann;
    ann.mention = std::move(mentions[i]);
    ann.sense = assigned[i];
    ann.lp = ann.mention.lp;
    ann.rel_score = rel_scores[i];
    if (ann.sense != kNoAnnotation) {
      auto [begin, end] = Window(i, n, w);
      std::vector<PageId> window_assigned(
          assigned.begin() + static_cast<std::ptrdiff_t>(begin),
          assigned.begin() + static_cast<std::ptrdiff_t>(end));
      ann.coherence = Coherence(ann.sense, window_assigned, scorer);
      ann.rho = Rho(PruneFeatures{ann.lp, ann.coherence}, cfg.prune);
      if (ann.rho < cfg.prune.rho_na) {
        ann.sense = kNoAnnotation;
        ann.pruned = true;
      }
    }
    result.annotations.push_back(std::move(ann));
  }

  result.rel_computations = scorer.Computations();
  return result;
}

}  // namespace

AnnotationResult AnnotateShort(std::string_view text, const KnowledgeBase& kb,
                               const PipelineConfig& cfg) {
  return Annotate(Spot(text, kb), kb, cfg, /*windowed=*/false);
}

AnnotationResult AnnotateLong(std::string_view text, const KnowledgeBase& kb,
                              const PipelineConfig& cfg) {
  return Annotate(Spot(text, kb), kb, cfg, /*windowed=*/true);
}

AnnotationResult AnnotateAuto(std::string_view text, const KnowledgeBase& kb,
                              const PipelineConfig& cfg) {
  std::vector<SpotMention> mentions = Spot(text, kb);
  const bool windowed = mentions.size() > cfg.long_text_threshold;
  return Annotate(std::move(mentions), kb, cfg, windowed);
}

}  // namespace wikitag
