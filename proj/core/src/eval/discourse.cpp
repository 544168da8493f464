#include "respkit/eval/discourse.hpp"

#include <cmath>
#include <set>

#include "respkit/error.hpp"
#include "respkit/util/text.hpp"

namespace respkit::eval {

using nlohmann::json;

std::vector<ResponseAction> Annotation::actions() const {
    std::vector<ResponseAction> out;
    out.reserve(spans.size());
    for (const auto& s : spans) out.push_back(s.action);
    return out;
}

json extract_json_object(std::string_view raw) {
    for (std::size_t start = raw.find('{'); start != std::string_view::npos; start = raw.find('{', start + 1)) {
        int depth = 0;
        bool in_str = false, esc = false;
        for (std::size_t i = start; i < raw.size(); ++i) {
            char c = raw[i];
            if (in_str) {
                if (esc) esc = false;
                else if (c == '\\') esc = true;
                else if (c == '"') in_str = false;
                continue;
            }
            if (c == '"') in_str = true;
            else if (c == '{') ++depth;
            else if (c == '}' && --depth == 0) {
                auto j = json::parse(raw.substr(start, i - start + 1), nullptr, false);
                if (!j.is_discarded() && j.is_object()) return j;
                break;
            }
        }
    }
    throw SchemaError("judge output contains no JSON object", std::string(raw));
}

Annotation parse_annotation(std::string_view raw) {
    json j = extract_json_object(raw);
    auto fail = [&](const std::string& why) -> void { throw SchemaError("annotation: " + why, std::string(raw)); };
    if (!j.contains("review_items") || !j["review_items"].is_array()) fail("missing array 'review_items'");
    if (!j.contains("response_spans") || !j["response_spans"].is_array()) fail("missing array 'response_spans'");

    Annotation a;
    std::set<std::string> ids;
    for (const auto& it : j["review_items"]) {
        if (!it.is_object() || !it.contains("id") || !it["id"].is_string() || !it.contains("type") ||
            !it["type"].is_string() || !it.contains("text") || !it["text"].is_string())
            fail("review item needs string id, type and text");
        corpus::ReviewItem item;
        item.item_id = it["id"].get<std::string>();
        auto type = parse_item_type(it["type"].get<std::string>());
        if (!type) fail("unknown item type '" + it["type"].get<std::string>() + "'");
        item.type = *type;
        item.span = it["text"].get<std::string>();
        if (item.item_id.empty() || item.span.empty()) fail("review item with empty id or text");
        if (!ids.insert(item.item_id).second) fail("duplicate item id '" + item.item_id + "'");
        a.items.push_back(std::move(item));
    }
    for (const auto& sp : j["response_spans"]) {
        if (!sp.is_object() || !sp.contains("text") || !sp["text"].is_string() || !sp.contains("action") ||
            !sp["action"].is_string())
            fail("response span needs string text and action");
        LabeledSpan s;
        s.text = sp["text"].get<std::string>();
        auto label = sp["action"].get<std::string>();
        auto action = parse_action(label);
        if (!action) fail("action label '" + label + "' is not in the taxonomy");
        s.action = *action;
        if (sp.contains("item_ids")) {
            if (!sp["item_ids"].is_array()) fail("item_ids must be an array");
            for (const auto& id : sp["item_ids"]) {
                if (!id.is_string()) fail("item_ids must be strings");
                if (!ids.count(id.get<std::string>())) fail("span refers to unknown item '" + id.get<std::string>() + "'");
                s.item_ids.push_back(id.get<std::string>());
            }
        }
        s.words = text::word_count(s.text);
        a.spans.push_back(std::move(s));
    }
    return a;
}

std::string annotation_prompt(std::string_view review_segment, std::string_view response) {
    std::string p =
        "Analyze a peer-review comment and the author response to it.\n"
        "1. Split the review comment into items. Each item has an id, a type and its text.\n"
        "   Types: Criticism (an evaluative statement about the paper), Question (a request for information), "
        "Request (a request for changes).\n"
        "   Use ids C1, C2, ... for criticisms, Q1, ... for questions and R1, ... for requests.\n"
        "2. Split the response into consecutive spans. Give each span exactly one action label and the ids of the "
        "review items it addresses (an empty list if none).\n"
        "   Action labels:\n";
    for (const auto& info : kActionTable) {
        p += "   - " + std::string(info.label) + " (" + std::string(to_string(info.stance)) +
             "): " + std::string(info.definition) + "\n";
    }
    p += "Return only a JSON object of the form\n"
         "{\"review_items\": [{\"id\": \"C1\", \"type\": \"Criticism\", \"text\": \"...\"}], "
         "\"response_spans\": [{\"text\": \"...\", \"item_ids\": [\"C1\"], \"action\": \"concede criticism\"}]}\n\n"
         "Review comment:\n";
    p += review_segment;
    p += "\n\nAuthor response:\n";
    p += response;
    return p;
}

Annotation annotate_response(std::string_view review_segment, std::string_view response,
                             providers::ChatProvider& judge) {
    providers::ChatRequest req;
    req.task = "annotate";
    req.messages.push_back({"user", annotation_prompt(review_segment, response)});
    req.payload = {{"review", review_segment}, {"response", response}};
    auto a = parse_annotation(judge.complete(req).text);
    if (text::trim(response).empty()) a.spans.clear();
    return a;
}

StanceProfile stance_profile(const std::vector<StanceMass>& spans) {
    std::array<double, kStanceCount> mass{};
    double total = 0.0;
    for (const auto& s : spans) {
        mass[static_cast<std::size_t>(s.stance)] += static_cast<double>(s.words);
        total += static_cast<double>(s.words);
    }
    if (total <= 0.0) throw ValidationError("stance profile undefined: spans carry no words");
    StanceProfile p;
    for (std::size_t i = 0; i < kStanceCount; ++i) p.proportions[i] = mass[i] / total;
    p.arg_load = p.of(Stance::Cooperative) + p.of(Stance::Defensive) + p.of(Stance::Hedge);
    return p;
}

StanceProfile stance_profile(const std::vector<LabeledSpan>& spans) {
    std::vector<StanceMass> m;
    m.reserve(spans.size());
    for (const auto& s : spans) m.push_back({stance_of(s.action), s.words});
    return stance_profile(m);
}

TransitionFlow transition_flow(const std::vector<std::vector<LabeledSpan>>& responses, std::size_t n_bins) {
    TransitionFlow f;
    f.n_bins = n_bins == 0 ? 1 : n_bins;
    f.counts.assign(f.n_bins, {});
    f.density.assign(f.n_bins, {});
    for (const auto& spans : responses) {
        if (spans.empty()) continue;
        std::size_t total = 0;
        for (const auto& s : spans) total += s.words;
        std::size_t before = 0;
        for (std::size_t k = 0; k < spans.size(); ++k) {
            double mid = total > 0 ? (static_cast<double>(before) + static_cast<double>(spans[k].words) / 2.0) /
                                         static_cast<double>(total)
                                   : (static_cast<double>(k) + 0.5) / static_cast<double>(spans.size());
            before += spans[k].words;
            auto bin = std::min(f.n_bins - 1, static_cast<std::size_t>(std::floor(mid * static_cast<double>(f.n_bins))));
            ++f.counts[bin][static_cast<std::size_t>(stance_of(spans[k].action))];
            if (k > 0) {
                ++f.transitions[static_cast<std::size_t>(stance_of(spans[k - 1].action))]
                               [static_cast<std::size_t>(stance_of(spans[k].action))];
            }
        }
    }
    for (std::size_t b = 0; b < f.n_bins; ++b) {
        std::size_t n = 0;
        for (auto c : f.counts[b]) n += c;
        if (n == 0) continue;
        for (std::size_t s = 0; s < kStanceCount; ++s)
            f.density[b][s] = static_cast<double>(f.counts[b][s]) / static_cast<double>(n);
    }
    return f;
}

}  // namespace respkit::eval
