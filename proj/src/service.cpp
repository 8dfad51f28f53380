#include "wikitag/service.hpp"

namespace wikitag {

using nlohmann::json;

json AnnotationToJson(const Annotation& a, const KnowledgeBase& kb) {
  json j;
  j["spot"] = a.mention.anchor;
  j["start"] = a.mention.char_begin;
  j["end"] = a.mention.char_end;
  j["id"] = a.sense;
  if (a.sense != kNoAnnotation) {
    const PageRecord* rec = kb.catalog().Find(a.sense);
    j["title"] = rec ? rec->title : "";
  } else {
    j["title"] = "";
  }
  j["lp"] = a.lp;
  j["coherence"] = a.coherence;
  j["rho"] = a.rho;
  j["rel_score"] = a.rel_score;
  j["pruned"] = a.pruned;
  return j;
}

json TagDocument(std::string_view text, const KnowledgeBase& kb,
                 const PipelineConfig& cfg) {
  AnnotationResult result = AnnotateAuto(text, kb, cfg);
  json annotations = json::array();
  for (const Annotation& a : result.annotations) {
    annotations.push_back(AnnotationToJson(a, kb));
  }
  return json{{"annotations", annotations},
              {"mentions", result.mention_count},
              {"windowed", result.windowed}};
}

std::optional<ParamError> ApplyQueryParam(PipelineConfig& cfg,
                                          const std::string& key,
                                          const std::string& value) {
  auto unit_interval = [&](double* out) -> std::optional<ParamError> {
    try {
      std::size_t used = 0;
      double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      if (v < 0.0 || v > 1.0) {
        return ParamError{key + " must be in [0,1], got " + value};
      }
      *out = v;
      return std::nullopt;
    } catch (const std::exception&) {
      return ParamError{"bad numeric value for " + key + ": " + value};
    }
  };
  if (key == "rho") return unit_interval(&cfg.prune.rho_na);
  if (key == "eps") return unit_interval(&cfg.disamb.epsilon);
  if (key == "tau") return unit_interval(&cfg.disamb.tau);
  if (key == "window") {
    try {
      std::size_t used = 0;
      long v = std::stol(value, &used);
      if (used != value.size() || v < 2) {
        return ParamError{"window must be an integer >= 2"};
      }
      cfg.window_anchors = static_cast<std::size_t>(v);
      return std::nullopt;
    } catch (const std::exception&) {
      return ParamError{"bad integer value for window: " + value};
    }
  }
  if (key == "pruner") {
    auto method = PruneMethodFromString(value);
    if (!method) return ParamError{"unknown pruner '" + value + "'"};
    if (*method == PruneMethod::kLr && !cfg.prune.lr_model) {
      return ParamError{"lr pruner requires a model loaded at startup"};
    }
    cfg.prune.method = *method;
    return std::nullopt;
  }
  return ParamError{"unknown parameter '" + key + "'"};
}

}  // namespace wikitag
