#include "respkit/gen/engine.hpp"

#include <regex>

#include "respkit/corpus/io.hpp"
#include "respkit/error.hpp"
#include "respkit/util/parallel.hpp"
#include "respkit/util/text.hpp"

namespace respkit::gen {

using nlohmann::json;

std::vector<std::string> extract_placeholders(std::string_view text) {
    static const std::regex re(R"(\[author info:[^\]]*\])");
    std::vector<std::string> out;
    for (std::cregex_iterator it(text.begin(), text.end(), re), end; it != end; ++it) out.push_back(it->str());
    return out;
}

double placeholder_rate(const std::vector<GenerationResult>& results) {
    if (results.empty()) return 0.0;
    std::size_t with = 0;
    for (const auto& r : results) with += r.placeholders.empty() ? 0 : 1;
    return static_cast<double>(with) / static_cast<double>(results.size());
}

json request_payload(const GenerationRequest& req) {
    json edits = json::array();
    json contexts = json::array();
    for (const auto& e : req.author_edits) {
        edits.push_back(e.text);
        contexts.push_back(render_edit_with_context(e));
    }
    json p{{"setting", to_string(req.setting)}, {"pair_id", req.pair_id},   {"review", req.review_segment},
           {"edits", edits},                    {"edit_contexts", contexts}};
    p["paragraphs"] = req.v1_paragraphs ? json(*req.v1_paragraphs) : json::array();
    p["length_limit"] = req.length_limit ? json(*req.length_limit) : json();
    if (req.review_items) {
        json items = json::array();
        for (const auto& it : *req.review_items) items.push_back(corpus::to_json(it));
        p["items"] = items;
    }
    if (req.plan) p["plan"] = corpus::to_json(*req.plan);
    if (req.prior_draft) p["previous"] = *req.prior_draft;
    if (req.prior_eval) {
        if (req.prior_eval->quality) p["quality"] = eval::to_json(*req.prior_eval->quality);
        if (req.prior_eval->gfp) p["gfp"] = req.prior_eval->gfp->supported;
    }
    return p;
}

GenerationResult generate(const GenerationRequest& req, providers::ChatProvider& provider) {
    GenerationResult r;
    r.pair_id = req.pair_id;
    r.setting = req.setting;
    r.prompt = build_prompt(req);
    providers::ChatRequest call;
    call.task = is_refinement(req.setting) ? "refine" : "generate";
    call.messages.push_back({"user", r.prompt});
    call.payload = request_payload(req);
    auto resp = provider.complete(call);
    r.response_text = std::move(resp.text);
    r.placeholders = extract_placeholders(r.response_text);
    r.word_count = text::word_count(r.response_text);
    r.audit_id = std::move(resp.audit_id);
    r.attempts = resp.attempts;
    return r;
}

Setting refinement_setting(Setting s) {
    switch (s) {
        case Setting::S6:
        case Setting::S8: return Setting::S8;
        case Setting::S7:
        case Setting::S9: return Setting::S9;
        default:
            throw RequestValidationError("setting", to_string(s) + " drafts cannot be refined; use S6 or S7");
    }
}

GenerationRequest refinement_request(const GenerationResult& prior, const eval::EvalReport& report,
                                     const GenerationRequest& req, std::optional<Setting> target) {
    if (target && !is_refinement(*target))
        throw RequestValidationError("setting", to_string(*target) + " is not a refinement setting; use S8 or S9");
    GenerationRequest next = req;
    next.setting = target ? *target : refinement_setting(prior.setting);
    next.pair_id = prior.pair_id.empty() ? req.pair_id : prior.pair_id;
    next.prior_draft = prior.response_text;
    next.prior_eval = report;
    return next;
}

GenerationResult refine(const GenerationResult& prior, const eval::EvalReport& report, const GenerationRequest& req,
                        providers::ChatProvider& provider, std::optional<Setting> target) {
    return generate(refinement_request(prior, report, req, target), provider);
}

RefinementTrace refine_loop(const GenerationResult& initial, const GenerationRequest& req,
                            const std::function<eval::EvalReport(const GenerationResult&)>& evaluate,
                            providers::ChatProvider& provider, int rounds, std::optional<Setting> target) {
    RefinementTrace trace;
    GenerationResult current = initial;
    for (int k = 0; k < rounds; ++k) {
        auto report = evaluate(current);
        auto next = refine(current, report, req, provider, target);
        trace.rounds.push_back({current, std::move(report)});
        bool same = next.response_text == current.response_text;
        current = std::move(next);
        if (same) {
            trace.fixed_point = true;
            break;
        }
    }
    trace.final_draft = std::move(current);
    return trace;
}

std::vector<BatchOutcome> generate_batch(const std::vector<GenerationRequest>& requests,
                                         providers::ChatProvider& provider, std::size_t max_in_flight) {
    std::vector<BatchOutcome> out(requests.size());
    util::parallel_for(requests.size(), std::max<std::size_t>(1, max_in_flight), [&](std::size_t i) {
        out[i].pair_id = requests[i].pair_id;
        out[i].setting = requests[i].setting;
        try {
            out[i].result = generate(requests[i], provider);
        } catch (const Error& e) {
            out[i].error = e.what();
        }
    });
    return out;
}

std::vector<AuthorEdit> author_edits_for(const corpus::Re3Triplet& t, const corpus::Corpus& corpus) {
    std::vector<AuthorEdit> out;
    for (const auto& ae : t.aligned_edits) {
        const auto* e = corpus.find_edit(ae.edit_id);
        if (!e) throw ValidationError("triplet " + t.pair.pair_id + " references unknown edit '" + ae.edit_id + "'");
        const std::string& sid = e->new_id ? *e->new_id : *e->old_id;
        AuthorEdit a;
        a.text = corpus.sentence_text(sid);
        if (auto loc = corpus.locate(sid)) {
            const auto& doc = corpus.documents()[loc->document];
            const auto& sec = doc.sections[loc->section];
            std::vector<std::string> parts;
            for (const auto& s : sec.paragraphs[loc->paragraph].sentences) parts.push_back(s.text);
            a.paragraph = text::join(parts, " ");
            if (!sec.title.empty()) a.section = sec.title;
        }
        out.push_back(std::move(a));
    }
    return out;
}

json to_json(const GenerationResult& r) {
    return {{"pair_id", r.pair_id},
            {"setting", to_string(r.setting)},
            {"prompt", r.prompt},
            {"response", r.response_text},
            {"placeholders", r.placeholders},
            {"word_count", r.word_count},
            {"audit_id", r.audit_id},
            {"attempts", r.attempts}};
}

namespace {

Setting setting_from(const json& j, const char* key) {
    auto s = j.at(key).get<std::string>();
    auto v = parse_setting(s);
    if (!v) throw RequestValidationError("setting", "unknown setting '" + s + "'");
    return *v;
}

}  // namespace

GenerationResult result_from_json(const json& j) {
    try {
        GenerationResult r;
        r.pair_id = j.value("pair_id", std::string{});
        r.setting = setting_from(j, "setting");
        r.prompt = j.value("prompt", std::string{});
        r.response_text = j.at("response").get<std::string>();
        r.placeholders = extract_placeholders(r.response_text);
        r.word_count = text::word_count(r.response_text);
        r.audit_id = j.value("audit_id", std::string{});
        r.attempts = j.value("attempts", 1);
        return r;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed generation record: ") + e.what(), j.dump());
    }
}

json to_json(const GenerationRequest& r) {
    json edits = json::array();
    for (const auto& e : r.author_edits) {
        json je{{"text", e.text}};
        if (e.paragraph) je["paragraph"] = *e.paragraph;
        if (e.section) je["section"] = *e.section;
        edits.push_back(je);
    }
    json j{{"setting", to_string(r.setting)},
           {"pair_id", r.pair_id},
           {"review_segment", r.review_segment},
           {"author_edits", edits},
           {"venue", corpus::to_string(r.venue_mode)}};
    if (r.v1_paragraphs) j["v1_paragraphs"] = *r.v1_paragraphs;
    if (r.length_limit) j["length_limit"] = *r.length_limit;
    if (r.review_items) {
        json items = json::array();
        for (const auto& it : *r.review_items) items.push_back(corpus::to_json(it));
        j["review_items"] = items;
    }
    if (r.plan) j["plan"] = corpus::to_json(*r.plan);
    if (r.prior_draft) j["prior_draft"] = *r.prior_draft;
    if (r.prior_eval) j["prior_eval"] = eval::to_json(*r.prior_eval);
    return j;
}

GenerationRequest request_from_json(const json& j) {
    auto field = [&](const char* name, auto&& fn) {
        try {
            fn();
        } catch (const RequestValidationError&) {
            throw;
        } catch (const std::exception& e) {
            throw RequestValidationError(name, std::string("invalid ") + name + ": " + e.what());
        }
    };
    GenerationRequest r;
    field("setting", [&] { r.setting = j.contains("setting") ? setting_from(j, "setting") : Setting::S1; });
    field("pair_id", [&] { r.pair_id = j.value("pair_id", std::string{}); });
    field("review_segment", [&] { r.review_segment = j.at("review_segment").get<std::string>(); });
    field("author_edits", [&] {
        for (const auto& e : j.value("author_edits", json::array())) {
            AuthorEdit a;
            if (e.is_string()) {
                a.text = e.get<std::string>();
            } else {
                a.text = e.at("text").get<std::string>();
                if (e.contains("paragraph") && !e["paragraph"].is_null()) a.paragraph = e["paragraph"].get<std::string>();
                if (e.contains("section") && !e["section"].is_null()) a.section = e["section"].get<std::string>();
            }
            r.author_edits.push_back(std::move(a));
        }
    });
    field("v1_paragraphs", [&] {
        if (j.contains("v1_paragraphs") && !j["v1_paragraphs"].is_null())
            r.v1_paragraphs = j["v1_paragraphs"].get<std::vector<std::string>>();
    });
    field("length_limit", [&] {
        if (j.contains("length_limit") && !j["length_limit"].is_null())
            r.length_limit = j["length_limit"].get<std::size_t>();
    });
    field("review_items", [&] {
        if (j.contains("review_items") && !j["review_items"].is_null()) {
            std::vector<corpus::ReviewItem> items;
            for (const auto& it : j["review_items"]) items.push_back(corpus::review_item_from_json(it));
            r.review_items = std::move(items);
        }
    });
    field("plan", [&] {
        if (j.contains("plan") && !j["plan"].is_null()) r.plan = corpus::plan_from_json(j["plan"]);
    });
    field("prior_draft", [&] {
        if (j.contains("prior_draft") && !j["prior_draft"].is_null()) r.prior_draft = j["prior_draft"].get<std::string>();
    });
    field("prior_eval", [&] {
        if (j.contains("prior_eval") && !j["prior_eval"].is_null()) r.prior_eval = eval::report_from_json(j["prior_eval"]);
    });
    field("venue", [&] {
        if (j.contains("venue")) {
            auto v = corpus::parse_venue(j["venue"].get<std::string>());
            if (!v) throw std::invalid_argument("expected conference or journal");
            r.venue_mode = *v;
        }
    });
    return r;
}

}  // namespace respkit::gen
