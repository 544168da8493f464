#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "respkit/corpus/model.hpp"
#include "respkit/eval/report.hpp"
#include "respkit/providers/provider.hpp"

namespace respkit::eval {

/// A response span with its action label and the review items it addresses.
struct LabeledSpan {
    std::string text;
    std::vector<std::string> item_ids;
    ResponseAction action = ResponseAction::Other;
    std::size_t words = 0;
};

struct Annotation {
    std::vector<corpus::ReviewItem> items;
    std::vector<LabeledSpan> spans;

    std::vector<ResponseAction> actions() const;
};

/// Returns the first top-level JSON object in `raw`, tolerating surrounding prose or code
/// fences. Throws SchemaError (keeping `raw`) when none parses.
nlohmann::json extract_json_object(std::string_view raw);

/// Validates the annotation schema:
///   {"review_items": [{"id", "type", "text"}], "response_spans": [{"text", "item_ids", "action"}]}
/// Types and actions must come from the closed taxonomies and item_ids must name listed items.
/// Throws SchemaError with the raw payload.
Annotation parse_annotation(std::string_view raw);

std::string annotation_prompt(std::string_view review_segment, std::string_view response);

/// Itemizes the review and labels response spans with one judge call.
/// An empty response yields no spans.
Annotation annotate_response(std::string_view review_segment, std::string_view response,
                             providers::ChatProvider& judge);

struct StanceMass {
    Stance stance = Stance::Other;
    std::size_t words = 0;
};

/// Word-weighted stance proportions. Throws ValidationError when the total word mass is 0.
StanceProfile stance_profile(const std::vector<StanceMass>& spans);
StanceProfile stance_profile(const std::vector<LabeledSpan>& spans);

struct TransitionFlow {
    std::size_t n_bins = 10;
    /// Per position bin, the fraction of spans of each stance; empty bins are all zero.
    std::vector<std::array<double, kStanceCount>> density;
    std::vector<std::array<std::size_t, kStanceCount>> counts;
    /// transitions[from][to]: adjacent span pairs within a response.
    std::array<std::array<std::size_t, kStanceCount>, kStanceCount> transitions{};
};

/// Bins spans by the relative position of their word midpoint within the response
/// (by span index when a response has no words) and counts adjacent stance transitions.
TransitionFlow transition_flow(const std::vector<std::vector<LabeledSpan>>& responses, std::size_t n_bins = 10);

}  // namespace respkit::eval
