#pragma once

#include <string>
#include <string_view>

#include "respkit/eval/discourse.hpp"
#include "respkit/eval/report.hpp"
#include "respkit/providers/provider.hpp"

namespace respkit::eval {

/// Rubric prompt over the review, the response and (when known) the item-to-span alignment.
std::string quality_prompt(std::string_view review_segment, std::string_view response, const Annotation* alignment);

/// Parses
///   {"scores": {"targeting": 1..5, "specificity": 1..5, "convincingness": 1..5},
///    "justifications": {dim: {"strengths": [...], "weaknesses": [...]}},
///    "suggestions": {dim: [...]}}
/// Every score must be present and an integer in 1..5; justification and suggestion lists
/// default to empty. Throws SchemaError with the raw payload.
QualityBlock parse_quality(std::string_view raw);

QualityBlock judge_quality(std::string_view review_segment, std::string_view response, const Annotation* alignment,
                           providers::ChatProvider& judge);

}  // namespace respkit::eval
