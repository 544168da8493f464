#include "respkit/eval/quality.hpp"

#include <cmath>

#include "respkit/corpus/io.hpp"
#include "respkit/error.hpp"

namespace respkit::eval {

using nlohmann::json;

std::string quality_prompt(std::string_view review_segment, std::string_view response, const Annotation* alignment) {
    std::string p =
        "You are an experienced area chair judging an author response to a peer-review comment.\n"
        "Score the response from 1 (poor) to 5 (excellent) on three criteria:\n"
        "- targeting: does it directly address every concern, question and request of the reviewer?\n"
        "  5 all items addressed head-on; 3 some items addressed vaguely or skipped; 1 off-topic.\n"
        "- specificity: does it give concrete evidence, numbers, sections, experiments or changes?\n"
        "  5 concrete and verifiable throughout; 3 partly concrete; 1 generic statements only.\n"
        "- convincingness: is the justification clear, logical and persuasive?\n"
        "  5 would resolve the concern; 3 plausible but incomplete; 1 unpersuasive or evasive.\n"
        "For each criterion list strengths and weaknesses as short bullet points that cite item ids where "
        "relevant, and give one or two actionable suggestions that would raise the score to 5.\n"
        "Return only a JSON object of the form\n"
        "{\"scores\": {\"targeting\": 4, \"specificity\": 3, \"convincingness\": 3}, "
        "\"justifications\": {\"targeting\": {\"strengths\": [\"...\"], \"weaknesses\": [\"...\"]}, ...}, "
        "\"suggestions\": {\"targeting\": [\"...\"], ...}}\n\nReview comment:\n";
    p += review_segment;
    p += "\n\nAuthor response:\n";
    p += response;
    if (alignment && !alignment->items.empty()) {
        p += "\n\nReview items and the response spans addressing them:\n";
        for (const auto& it : alignment->items) {
            p += "- #" + it.item_id + " (" + std::string(to_string(it.type)) + "): " + it.span + "\n";
            for (const auto& s : alignment->spans) {
                for (const auto& id : s.item_ids) {
                    if (id == it.item_id) p += "  - [" + std::string(to_string(s.action)) + "] " + s.text + "\n";
                }
            }
        }
    }
    return p;
}

QualityBlock parse_quality(std::string_view raw) {
    json j = extract_json_object(raw);
    auto fail = [&](const std::string& why) { throw SchemaError("quality: " + why, std::string(raw)); };
    if (!j.contains("scores") || !j["scores"].is_object()) fail("missing object 'scores'");
    QualityBlock q;
    auto string_list = [&](const json& v, const std::string& what) {
        std::vector<std::string> out;
        if (v.is_null()) return out;
        if (!v.is_array()) fail(what + " must be an array");
        for (const auto& x : v) {
            if (!x.is_string()) fail(what + " entries must be strings");
            out.push_back(x.get<std::string>());
        }
        return out;
    };
    for (auto d : kQualityDims) {
        auto i = static_cast<std::size_t>(d);
        std::string key(to_string(d));
        const auto& scores = j["scores"];
        if (!scores.contains(key)) fail("missing score for " + key);
        const auto& v = scores[key];
        if (!v.is_number()) fail("score for " + key + " is not a number");
        double x = v.get<double>();
        if (x != std::floor(x) || x < 1.0 || x > 5.0) fail("score for " + key + " must be an integer in 1..5");
        q.raw[i] = static_cast<int>(x);
        q.normalized[i] = normalize_quality(q.raw[i]);
        if (j.contains("justifications") && j["justifications"].contains(key)) {
            const auto& jj = j["justifications"][key];
            if (!jj.is_object()) fail("justifications." + key + " must be an object");
            q.justifications[i].strengths = string_list(jj.value("strengths", json()), key + " strengths");
            q.justifications[i].weaknesses = string_list(jj.value("weaknesses", json()), key + " weaknesses");
        }
        if (j.contains("suggestions") && j["suggestions"].contains(key))
            q.suggestions[i] = string_list(j["suggestions"][key], key + " suggestions");
    }
    return q;
}

QualityBlock judge_quality(std::string_view review_segment, std::string_view response, const Annotation* alignment,
                           providers::ChatProvider& judge) {
    providers::ChatRequest req;
    req.task = "quality";
    req.messages.push_back({"user", quality_prompt(review_segment, response, alignment)});
    json items = json::array();
    if (alignment)
        for (const auto& it : alignment->items) items.push_back(corpus::to_json(it));
    req.payload = {{"review", review_segment}, {"response", response}, {"items", items}};
    return parse_quality(judge.complete(req).text);
}

}  // namespace respkit::eval
