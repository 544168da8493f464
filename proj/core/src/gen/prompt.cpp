#include "respkit/gen/prompt.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "respkit/error.hpp"

namespace respkit::gen {

std::string to_string(Setting s) { return "S" + std::to_string(static_cast<int>(s)); }

std::optional<Setting> parse_setting(std::string_view s) {
    if (s.size() == 2 && (s[0] == 'S' || s[0] == 's') && s[1] >= '1' && s[1] <= '9')
        return static_cast<Setting>(s[1] - '0');
    if (s.size() == 1 && s[0] >= '1' && s[0] <= '9') return static_cast<Setting>(s[0] - '0');
    return std::nullopt;
}

namespace {
int num(Setting s) { return static_cast<int>(s); }
}  // namespace

bool needs_edits(Setting s) { return num(s) >= 2; }
bool needs_context(Setting s) { return num(s) >= 3; }
bool needs_v1(Setting s) { return num(s) >= 4; }
bool needs_limit(Setting s) { return s == Setting::S5 || s == Setting::S6 || s == Setting::S8; }
bool needs_plan(Setting s) { return num(s) >= 6; }
bool is_refinement(Setting s) { return s == Setting::S8 || s == Setting::S9; }

void validate(const GenerationRequest& req) {
    auto fail = [&](const std::string& field, const std::string& why) {
        throw RequestValidationError(field, to_string(req.setting) + " requires " + field + ": " + why);
    };
    if (req.review_segment.empty()) fail("review_segment", "the review segment is empty");
    Setting s = req.setting;
    if (needs_edits(s) && req.author_edits.empty()) fail("author_edits", "at least one author edit is needed");
    if (needs_v1(s) && (!req.v1_paragraphs || req.v1_paragraphs->empty()))
        fail("v1_paragraphs", "retrieved v1 paragraphs are missing");
    if (needs_limit(s) && !req.length_limit) fail("length_limit", "a word limit is missing");
    if (needs_plan(s)) {
        if (!req.review_items || req.review_items->empty()) fail("review_items", "the itemized review is missing");
        if (!req.plan || req.plan->empty()) fail("plan", "the response plan is missing");
        std::set<std::string> ids;
        for (const auto& it : *req.review_items) {
            if (it.span.empty()) fail("review_items", "item " + it.item_id + " has an empty span");
            ids.insert(it.item_id);
        }
        for (const auto& p : req.plan->items) {
            if (!ids.count(p.item_id)) fail("plan", "plan refers to unknown item '" + p.item_id + "'");
        }
    }
    if (is_refinement(s)) {
        if (!req.prior_draft) fail("prior_draft", "the previous response is missing");
        if (!req.prior_eval) fail("prior_eval", "the previous evaluation is missing");
        if (!req.prior_eval->quality) fail("prior_eval", "the previous evaluation has no quality scores");
        if (!req.prior_eval->gfp) fail("prior_eval", "the previous evaluation has no factuality score");
    }
}

std::size_t default_length_limit(std::size_t human_response_words) { return human_response_words + 50; }

std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tmpl.size() + 64);
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        char c = tmpl[i];
        if (c == '{' && i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
            out += '{';
            ++i;
        } else if (c == '}' && i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
            out += '}';
            ++i;
        } else if (c == '{') {
            auto close = tmpl.find('}', i);
            if (close == std::string_view::npos) throw std::invalid_argument("unterminated template slot");
            std::string name(tmpl.substr(i + 1, close - i - 1));
            out += values.at(name);
            i = close;
        } else {
            out += c;
        }
    }
    return out;
}

std::string render_list(const std::vector<std::string>& items) { return nlohmann::json(items).dump(); }

std::string render_edit_with_context(const AuthorEdit& e) {
    std::string s = e.text;
    if (e.paragraph && !e.paragraph->empty()) s += " in " + *e.paragraph;
    if (e.section && !e.section->empty()) s += " in Section " + *e.section;
    return s;
}

namespace {

constexpr std::string_view kIntro =
    "You are a research assistant helping authors prepare an author response for a paper under peer review.";
constexpr std::string_view kReceive = "You will receive:";
constexpr std::string_view kReceiveComment = "  - The reviewer's comment.";
constexpr std::string_view kReceiveCommentItems =
    "  - The reviewer's comment. And extracted items from the review comment, including questions, criticisms "
    "and requests.";
constexpr std::string_view kReceiveInput = "  - The author's additional input regarding the comment.";
constexpr std::string_view kTask =
    "Your task is to write a specific and convincing response addressing the reviewer's comment.";
constexpr std::string_view kTaskPlan =
    "Your task is to write a clear and convincing response addressing the reviewer's comment and the items. "
    "Make the response coherent, fluent and human-like, without necessarily listing the items.\n"
    "Write a response addressing the review comment and the items based on the given response action plan.";
constexpr std::string_view kReview = "  - The review comment is: {review}.";
constexpr std::string_view kItemsHeader = "    - The items extracted from the review comment are:";
constexpr std::string_view kPlanHeader = "    - The response action plan is:";
constexpr std::string_view kGroup = "      - {group}: {list}";
constexpr std::string_view kV1 = "  - Here are the top {k} paragraphs retrieved from the original paper: {paragraphs}";
constexpr std::string_view kInput = "  - Refer to the author input below: {edits}";
constexpr std::string_view kOutput = "Output the response only. Do not include any other text.";
constexpr std::string_view kVenue =
    "This author response is prepared during the rebuttal phase, before submitting any revisions (like in ARR "
    "process). You should use the additional author input to address the review comment if they are useful, and "
    "may outline future planned changes in the final version if relevant but do not refer to completed revisions.";
constexpr std::string_view kLimit = "Please limit the response to NO MORE than {limit} words.";
constexpr std::string_view kRefineNote =
    "Note: This is a refinement round to improve the quality of the previous generated response based on its "
    "evaluation results.";
constexpr std::string_view kPrevious = "  - The previous response generated is: {previous}.";
constexpr std::string_view kQuality =
    "  - The overall response scores (directness, specificity and convincingness, 5-point scale) and the "
    "respective justifications and improvement suggestions:{quality}";
constexpr std::string_view kFactuality =
    "  - Factuality score: {gfp}% of the atomic facts in the previous response are supported by the provided "
    "inputs.";
constexpr std::string_view kRefineTask =
    "TASK: Please revise the previous response based on the review comment, the provided inputs and the "
    "requirements, as well as the evaluation results above to improve the directness, specificity, "
    "convincingness and the factuality of the response. Output the revised response only.";

std::string_view prompt_dim_name(eval::QualityDim d) {
    switch (d) {
        case eval::QualityDim::Targeting: return "directness";
        case eval::QualityDim::Specificity: return "specificity";
        case eval::QualityDim::Convincingness: return "convincingness";
    }
    return "directness";
}

std::string list_or_none(const std::vector<std::string>& v) { return v.empty() ? "none" : render_list(v); }

std::string render_quality(const eval::QualityBlock& q) {
    std::string out;
    for (auto d : eval::kQualityDims) {
        auto i = static_cast<std::size_t>(d);
        out += "\n    - " + std::string(prompt_dim_name(d)) + ": " + std::to_string(q.raw[i]) + "/5";
        out += "\n      - strengths: " + list_or_none(q.justifications[i].strengths);
        out += "\n      - weaknesses: " + list_or_none(q.justifications[i].weaknesses);
        out += "\n      - suggestions: " + list_or_none(q.suggestions[i]);
    }
    return out;
}

std::string plan_entry(const corpus::ItemPlan& p) {
    std::string s = "#" + p.item_id + ": ";
    for (std::size_t k = 0; k < p.actions.size(); ++k) {
        if (k) s += ", ";
        s += to_string(p.actions[k]);
    }
    return s;
}

void append_items_and_plan(const GenerationRequest& req, std::vector<std::string>& lines) {
    static constexpr std::pair<ItemType, std::string_view> groups[] = {
        {ItemType::Question, "questions"}, {ItemType::Criticism, "criticisms"}, {ItemType::Request, "requests"}};
    lines.emplace_back(kItemsHeader);
    for (const auto& [type, name] : groups) {
        std::vector<std::string> entries;
        for (const auto& it : *req.review_items)
            if (it.type == type) entries.push_back("#" + it.item_id + ": " + it.span);
        lines.push_back(render_template(kGroup, {{"group", std::string(name)}, {"list", render_list(entries)}}));
    }
    lines.emplace_back(kPlanHeader);
    for (const auto& [type, name] : groups) {
        std::vector<std::string> entries;
        for (const auto& it : *req.review_items) {
            if (it.type != type) continue;
            for (const auto& p : req.plan->items)
                if (p.item_id == it.item_id && !p.actions.empty()) entries.push_back(plan_entry(p));
        }
        lines.push_back(render_template(kGroup, {{"group", std::string(name)}, {"list", render_list(entries)}}));
    }
}

}  // namespace

std::string build_prompt(const GenerationRequest& req) {
    validate(req);
    const Setting s = req.setting;
    std::vector<std::string> lines;
    lines.emplace_back(kIntro);
    lines.emplace_back(kReceive);
    lines.emplace_back(needs_plan(s) ? kReceiveCommentItems : kReceiveComment);
    if (needs_edits(s)) lines.emplace_back(kReceiveInput);
    lines.emplace_back(needs_plan(s) ? kTaskPlan : kTask);
    lines.push_back(render_template(kReview, {{"review", req.review_segment}}));
    if (needs_plan(s)) append_items_and_plan(req, lines);
    if (needs_v1(s)) {
        lines.push_back(render_template(kV1, {{"k", std::to_string(req.v1_paragraphs->size())},
                                              {"paragraphs", render_list(*req.v1_paragraphs)}}));
    }
    if (needs_edits(s)) {
        std::vector<std::string> edits;
        for (const auto& e : req.author_edits) edits.push_back(needs_context(s) ? render_edit_with_context(e) : e.text);
        lines.push_back(render_template(kInput, {{"edits", render_list(edits)}}));
    }
    lines.emplace_back(kOutput);
    lines.emplace_back(kPlaceholderInstruction);
    if (req.venue_mode == corpus::Venue::Conference) lines.emplace_back(kVenue);
    if (needs_limit(s)) lines.push_back(render_template(kLimit, {{"limit", std::to_string(*req.length_limit)}}));
    if (is_refinement(s)) {
        const auto& ev = *req.prior_eval;
        lines.emplace_back(kRefineNote);
        lines.push_back(render_template(kPrevious, {{"previous", *req.prior_draft}}));
        lines.push_back(render_template(kQuality, {{"quality", render_quality(*ev.quality)}}));
        auto pct = static_cast<long long>(std::lround(ev.gfp->supported * 100.0));
        lines.push_back(render_template(kFactuality, {{"gfp", std::to_string(pct)}}));
        lines.emplace_back(kRefineTask);
    }
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i];
    }
    return out;
}

}  // namespace respkit::gen
