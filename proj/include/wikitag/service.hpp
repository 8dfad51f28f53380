#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "wikitag/pipeline.hpp"

namespace wikitag {

// One annotation as exposed on the wire and in batch output (API.md,
// OUTPUT_FORMAT.md). NA senses carry id = -1 and an empty title.
nlohmann::json AnnotationToJson(const Annotation& a, const KnowledgeBase& kb);

// The /tag response document; also the CLI's JSON output for one text, so the
// two paths share a single code path.
nlohmann::json TagDocument(std::string_view text, const KnowledgeBase& kb,
                           const PipelineConfig& cfg);

struct ServiceLimits {
  std::size_t max_text_bytes = 1 << 16;
};

struct ParamError {
  std::string message;
};

// Applies ?rho= ?eps= ?tau= ?window= ?pruner= overrides, bounds-checked.
// Returns an error message on a bad value.
std::optional<ParamError> ApplyQueryParam(PipelineConfig& cfg,
                                          const std::string& key,
                                          const std::string& value);

}  // namespace wikitag
