#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "respkit/corpus/model.hpp"
#include "respkit/gen/prompt.hpp"
#include "respkit/providers/provider.hpp"

namespace respkit::gen {

struct GenerationResult {
    std::string pair_id;
    Setting setting = Setting::S1;
    std::string prompt;
    std::string response_text;
    std::vector<std::string> placeholders;
    std::size_t word_count = 0;
    std::string audit_id;
    int attempts = 1;
};

/// Every "[author info: ...]" span, in order of appearance.
std::vector<std::string> extract_placeholders(std::string_view text);

/// Fraction of responses with at least one placeholder. 0 for an empty batch.
double placeholder_rate(const std::vector<GenerationResult>& results);

/// Structured copy of the request handed to providers next to the prompt.
nlohmann::json request_payload(const GenerationRequest& req);

/// Renders the prompt, calls the provider once and fills the result from its text.
/// Provider errors propagate unchanged.
GenerationResult generate(const GenerationRequest& req, providers::ChatProvider& provider);

/// Setting used to refine a draft produced under `s`: S6 -> S8, S7 -> S9, S8/S9 unchanged.
/// Throws RequestValidationError for settings without a refinement counterpart.
Setting refinement_setting(Setting s);

/// Re-prompts with the prior draft and its evaluation embedded. `target` (S8 or S9) overrides
/// refinement_setting(prior.setting); the request must then carry that setting's inputs.
GenerationResult refine(const GenerationResult& prior, const eval::EvalReport& report, const GenerationRequest& req,
                        providers::ChatProvider& provider, std::optional<Setting> target = std::nullopt);

/// The request refine() sends.
GenerationRequest refinement_request(const GenerationResult& prior, const eval::EvalReport& report,
                                     const GenerationRequest& req, std::optional<Setting> target = std::nullopt);

/// A draft and the evaluation that was fed back to refine it.
struct RefinementRound {
    GenerationResult draft;
    eval::EvalReport report;
};

struct RefinementTrace {
    std::vector<RefinementRound> rounds;
    GenerationResult final_draft;
    bool fixed_point = false;
};

/// Evaluate-then-refine for up to `rounds` rounds. Stops early when the provider returns
/// the prior text unchanged; `final_draft` is the last draft produced.
RefinementTrace refine_loop(const GenerationResult& initial, const GenerationRequest& req,
                            const std::function<eval::EvalReport(const GenerationResult&)>& evaluate,
                            providers::ChatProvider& provider, int rounds = 1,
                            std::optional<Setting> target = std::nullopt);

struct BatchOutcome {
    std::string pair_id;
    Setting setting = Setting::S1;
    std::optional<GenerationResult> result;
    std::string error;
};

/// Generates every request with at most `max_in_flight` concurrent provider calls.
/// Outcomes come back in request order whatever the completion order.
std::vector<BatchOutcome> generate_batch(const std::vector<GenerationRequest>& requests,
                                         providers::ChatProvider& provider, std::size_t max_in_flight = 4);

/// Author input for a triplet: one edit string per aligned edit (the new sentence, or the
/// old one for deletions) with the enclosing paragraph and section title.
std::vector<AuthorEdit> author_edits_for(const corpus::Re3Triplet& t, const corpus::Corpus& corpus);

nlohmann::json to_json(const GenerationResult& r);
GenerationResult result_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GenerationRequest& r);
GenerationRequest request_from_json(const nlohmann::json& j);

}  // namespace respkit::gen
