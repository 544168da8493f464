#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "respkit/corpus/model.hpp"
#include "respkit/eval/report.hpp"

namespace respkit::gen {

/// The nine input/control settings.
///   S1 review only            S2 + edit strings         S3 + paragraph context
///   S4 + retrieved v1 text    S5 S4 + length limit      S6 S5 + items and plan
///   S7 S6 without the limit   S8 refinement of S6       S9 refinement of S7
enum class Setting { S1 = 1, S2, S3, S4, S5, S6, S7, S8, S9 };

std::string to_string(Setting s);
std::optional<Setting> parse_setting(std::string_view s);

bool needs_edits(Setting s);
bool needs_context(Setting s);  ///< paragraph context and section titles are rendered
bool needs_v1(Setting s);
bool needs_limit(Setting s);
bool needs_plan(Setting s);
bool is_refinement(Setting s);

/// One piece of author input: an edit string with its optional location.
struct AuthorEdit {
    std::string text;
    std::optional<std::string> paragraph;
    std::optional<std::string> section;
};

struct GenerationRequest {
    Setting setting = Setting::S1;
    std::string pair_id;
    std::string review_segment;
    std::vector<AuthorEdit> author_edits;
    std::optional<std::vector<std::string>> v1_paragraphs;
    std::optional<std::size_t> length_limit;
    std::optional<corpus::ResponsePlan> plan;
    std::optional<std::vector<corpus::ReviewItem>> review_items;
    std::optional<std::string> prior_draft;
    std::optional<eval::EvalReport> prior_eval;
    corpus::Venue venue_mode = corpus::Venue::Journal;
};

/// Throws RequestValidationError naming the first missing or inconsistent field.
void validate(const GenerationRequest& req);

/// The limit used when none is given: the human response length plus 50 words.
std::size_t default_length_limit(std::size_t human_response_words);

/// Substitutes "{name}" slots in one left-to-right pass. Substituted text is never scanned
/// again, so values containing braces cannot change the template. "{{" and "}}" are literal
/// braces. Throws std::out_of_range for a slot without a value.
std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& values);

/// The prompt text for a request. Validates the request first.
std::string build_prompt(const GenerationRequest& req);

/// JSON array of strings, as used for every list slot in the prompts.
std::string render_list(const std::vector<std::string>& items);

/// "<edit> in <paragraph> in Section <title>", omitting absent parts.
std::string render_edit_with_context(const AuthorEdit& e);

inline constexpr std::string_view kPlaceholderInstruction =
    "Use placeholders like '[author info: <description>]' if you need extra information from the author to "
    "address the review comment.";

}  // namespace respkit::gen
