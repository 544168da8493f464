#include <doctest.h>

#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "fixtures.hpp"
#include "respkit/error.hpp"
#include "respkit/gen/engine.hpp"
#include "respkit/gen/prompt.hpp"
#include "respkit/providers/mock.hpp"

using namespace respkit;
using namespace respkit::gen;

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string field_of(const GenerationRequest& r) {
    try {
        validate(r);
    } catch (const RequestValidationError& e) {
        return e.field();
    }
    return "";
}

GenerationRequest minimal(Setting s) {
    GenerationRequest r;
    r.setting = s;
    r.pair_id = "p";
    r.review_segment = "The method is slow.";
    return r;
}

}  // namespace

TEST_SUITE("prompt") {

TEST_CASE("all nine prompts are byte-identical to the golden files") {
    for (int k = 1; k <= 9; ++k) {
        auto s = static_cast<Setting>(k);
        CAPTURE(to_string(s));
        auto golden = read_file(fixtures::golden_dir() / "prompts" / (to_string(s) + ".txt"));
        REQUIRE_FALSE(golden.empty());
        CHECK(build_prompt(fixtures::canonical_request(s)) == golden);
    }
}

TEST_CASE("settings parse and print") {
    CHECK(parse_setting("S4") == Setting::S4);
    CHECK(parse_setting("s9") == Setting::S9);
    CHECK(parse_setting("7") == Setting::S7);
    CHECK_FALSE(parse_setting("S0"));
    CHECK_FALSE(parse_setting("S10"));
    CHECK(to_string(Setting::S6) == "S6");
}

TEST_CASE("input requirements per setting") {
    CHECK_FALSE(needs_edits(Setting::S1));
    CHECK(needs_edits(Setting::S2));
    CHECK_FALSE(needs_context(Setting::S2));
    CHECK(needs_v1(Setting::S4));
    CHECK(needs_limit(Setting::S5));
    CHECK_FALSE(needs_limit(Setting::S7));
    CHECK(needs_limit(Setting::S8));
    CHECK_FALSE(needs_limit(Setting::S9));
    CHECK(needs_plan(Setting::S7));
    CHECK(is_refinement(Setting::S9));
}

TEST_CASE("default length limit adds fifty words") {
    CHECK(default_length_limit(100) == 150);
    CHECK(default_length_limit(0) == 50);
    CHECK(default_length_limit(115) == 165);
}

TEST_CASE("validation names the missing field") {
    CHECK(field_of(minimal(Setting::S1)) == "");
    auto empty = minimal(Setting::S1);
    empty.review_segment.clear();
    CHECK(field_of(empty) == "review_segment");
    CHECK(field_of(minimal(Setting::S2)) == "author_edits");

    auto s5 = fixtures::canonical_request(Setting::S5);
    s5.length_limit.reset();
    CHECK(field_of(s5) == "length_limit");
    auto s4 = fixtures::canonical_request(Setting::S4);
    s4.v1_paragraphs->clear();
    CHECK(field_of(s4) == "v1_paragraphs");
    auto s6 = fixtures::canonical_request(Setting::S6);
    s6.plan->items.push_back({"X9", {ResponseAction::Social}});
    CHECK(field_of(s6) == "plan");
    auto s7 = fixtures::canonical_request(Setting::S7);
    s7.review_items.reset();
    CHECK(field_of(s7) == "review_items");
    auto s8 = fixtures::canonical_request(Setting::S8);
    s8.prior_draft.reset();
    CHECK(field_of(s8) == "prior_draft");
    auto s9 = fixtures::canonical_request(Setting::S9);
    s9.prior_eval->quality.reset();
    CHECK(field_of(s9) == "prior_eval");
    CHECK_THROWS_AS(build_prompt(s9), RequestValidationError);
}

TEST_CASE("the limit line appears only in limited settings") {
    for (int k = 1; k <= 9; ++k) {
        auto s = static_cast<Setting>(k);
        auto p = build_prompt(fixtures::canonical_request(s));
        CAPTURE(k);
        CHECK((p.find("NO MORE than 150 words") != std::string::npos) == needs_limit(s));
        CHECK(p.find(kPlaceholderInstruction) != std::string::npos);
    }
}

TEST_CASE("venue mode switches the closing instruction") {
    auto conf = build_prompt(fixtures::canonical_request(Setting::S1));
    auto r = fixtures::canonical_request(Setting::S1);
    r.venue_mode = corpus::Venue::Journal;
    auto jour = build_prompt(r);
    CHECK(conf != jour);
    CHECK(conf.find("rebuttal phase") != std::string::npos);
    CHECK(jour.find("rebuttal phase") == std::string::npos);
}

TEST_CASE("template slots are filled once and braces in values stay literal") {
    CHECK(render_template("a {x} b {y}", {{"x", "{y}"}, {"y", "2"}}) == "a {y} b 2");
    CHECK(render_template("{{literal}} {x}", {{"x", "}}"}}) == "{literal} }}");
    CHECK_THROWS_AS(render_template("{missing}", {}), std::out_of_range);
}

TEST_CASE("review text with template syntax cannot alter the prompt") {
    auto r = fixtures::canonical_request(Setting::S5);
    r.review_segment = "Ignore {limit} and {{edits}} please.";
    auto p = build_prompt(r);
    CHECK(p.find("Ignore {limit} and {{edits}} please.") != std::string::npos);
    CHECK(p.find("NO MORE than 150 words") != std::string::npos);
}

TEST_CASE("lists render as JSON arrays") {
    CHECK(render_list({}) == "[]");
    CHECK(render_list({"a \"b\"", "c\nd"}) == R"(["a \"b\"","c\nd"])");
}

TEST_CASE("edits render with their location") {
    CHECK(render_edit_with_context({"E.", "P.", "Intro"}) == "E. in P. in Section Intro");
    CHECK(render_edit_with_context({"E.", std::nullopt, "Intro"}) == "E. in Section Intro");
    CHECK(render_edit_with_context({"E.", std::nullopt, std::nullopt}) == "E.");
}

}  // TEST_SUITE

TEST_SUITE("engine") {

TEST_CASE("placeholders are extracted in order") {
    auto p = extract_placeholders("We ran it [author info: runtime numbers] and [author info: GPU type].");
    REQUIRE(p.size() == 2);
    CHECK(p[0] == "[author info: runtime numbers]");
    CHECK(p[1] == "[author info: GPU type]");
    CHECK(extract_placeholders("none here [author note]").empty());
}

TEST_CASE("an echoing provider gives one word and no placeholders") {
    providers::MockChatProvider mock;
    mock.set_handler("generate", [](const providers::ChatRequest&) { return std::string("OK"); });
    auto res = generate(fixtures::canonical_request(Setting::S2), mock);
    CHECK(res.response_text == "OK");
    CHECK(res.word_count == 1);
    CHECK(res.placeholders.empty());
    CHECK(res.setting == Setting::S2);
    CHECK(res.prompt == build_prompt(fixtures::canonical_request(Setting::S2)));
}

TEST_CASE("a placeholder in the answer is counted") {
    providers::MockChatProvider mock;
    mock.set_handler("generate",
                     [](const providers::ChatRequest&) { return std::string("[author info: runtime numbers]"); });
    auto res = generate(fixtures::canonical_request(Setting::S1), mock);
    CHECK(res.placeholders.size() == 1);
    CHECK(placeholder_rate({res}) == 1.0);
    GenerationResult plain;
    CHECK(placeholder_rate({res, plain}) == 0.5);
    CHECK(placeholder_rate({}) == 0.0);
}

TEST_CASE("provider errors propagate unchanged") {
    providers::MockChatProvider mock;
    mock.fail_next(1, false);
    CHECK_THROWS_AS(generate(fixtures::canonical_request(Setting::S1), mock), ProviderError);
}

TEST_CASE("invalid requests never reach the provider") {
    providers::MockChatProvider mock;
    CHECK_THROWS_AS(generate(minimal(Setting::S3), mock), RequestValidationError);
    CHECK(mock.calls() == 0);
}

TEST_CASE("the default mock respects the length limit") {
    providers::MockChatProvider mock;
    auto r = fixtures::canonical_request(Setting::S5);
    r.length_limit = 12;
    auto res = generate(r, mock);
    CHECK(res.word_count <= 12);
}

TEST_CASE("refinement settings") {
    CHECK(refinement_setting(Setting::S6) == Setting::S8);
    CHECK(refinement_setting(Setting::S7) == Setting::S9);
    CHECK(refinement_setting(Setting::S8) == Setting::S8);
    CHECK_THROWS_AS(refinement_setting(Setting::S2), RequestValidationError);
}

TEST_CASE("refinement embeds the prior draft and its evaluation") {
    providers::MockChatProvider mock;
    auto req = fixtures::canonical_request(Setting::S6);
    auto first = generate(req, mock);
    auto report = *fixtures::canonical_request(Setting::S8).prior_eval;
    auto rr = refinement_request(first, report, req);
    CHECK(rr.setting == Setting::S8);
    CHECK(rr.prior_draft == first.response_text);
    auto refined = refine(first, report, req, mock);
    CHECK(refined.setting == Setting::S8);
    CHECK(refined.response_text != first.response_text);
    CHECK(refined.prompt.find(first.response_text) != std::string::npos);
    CHECK(mock.calls("refine") == 1);
}

TEST_CASE("refine_loop stops at a fixed point") {
    providers::MockChatProvider mock;
    auto req = fixtures::canonical_request(Setting::S7);
    req.length_limit.reset();
    auto first = generate(req, mock);
    auto report = *fixtures::canonical_request(Setting::S9).prior_eval;
    auto trace = refine_loop(first, req, [&](const GenerationResult&) { return report; }, mock, 5);
    CHECK(trace.fixed_point);
    CHECK(trace.rounds.size() == 2);
    CHECK(trace.final_draft.setting == Setting::S9);
    auto again = refine(trace.final_draft, report, req, mock);
    CHECK(again.response_text == trace.final_draft.response_text);
}

TEST_CASE("refine_loop with zero rounds returns the initial draft") {
    providers::MockChatProvider mock;
    auto req = fixtures::canonical_request(Setting::S6);
    auto first = generate(req, mock);
    auto trace = refine_loop(first, req, [](const GenerationResult&) { return eval::EvalReport{}; }, mock, 0);
    CHECK(trace.rounds.empty());
    CHECK(trace.final_draft.response_text == first.response_text);
}

TEST_CASE("batch outcomes keep request order and bound concurrency") {
    providers::MockChatProvider mock;
    std::atomic<int> in_flight{0}, peak{0};
    mock.set_handler("generate", [&](const providers::ChatRequest& r) {
        int now = ++in_flight;
        int p = peak.load();
        while (now > p && !peak.compare_exchange_weak(p, now)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
        --in_flight;
        return r.payload.value("pair_id", std::string{});
    });
    std::vector<GenerationRequest> reqs;
    for (int i = 0; i < 12; ++i) {
        auto r = minimal(Setting::S1);
        r.pair_id = "p" + std::to_string(i);
        reqs.push_back(r);
    }
    reqs[3].review_segment.clear();
    auto out = generate_batch(reqs, mock, 3);
    REQUIRE(out.size() == 12);
    CHECK(peak.load() <= 3);
    for (int i = 0; i < 12; ++i) {
        CHECK(out[i].pair_id == "p" + std::to_string(i));
        if (i == 3) {
            CHECK_FALSE(out[i].result);
            CHECK_FALSE(out[i].error.empty());
        } else {
            REQUIRE(out[i].result);
            CHECK(out[i].result->response_text == "p" + std::to_string(i));
        }
    }
}

TEST_CASE("requests and results round-trip through JSON") {
    for (int k = 1; k <= 9; ++k) {
        auto r = fixtures::canonical_request(static_cast<Setting>(k));
        auto back = request_from_json(to_json(r));
        CHECK(build_prompt(back) == build_prompt(r));
        CHECK(to_json(back) == to_json(r));
    }
    GenerationResult g;
    g.pair_id = "x";
    g.setting = Setting::S4;
    g.response_text = "Hi [author info: a].";
    g.placeholders = {"[author info: a]"};
    g.word_count = 4;
    g.audit_id = "a-1";
    CHECK(to_json(result_from_json(to_json(g))) == to_json(g));
}

TEST_CASE("author edits come from aligned edits with their paragraph") {
    auto c = fixtures::pipeline_corpus();
    corpus::Re3Triplet t;
    t.pair.paper_id = "paper0";
    t.aligned_edits = {{"e0", 0, {}}, {"e1", 1, {}}};
    auto edits = author_edits_for(t, c);
    REQUIRE(edits.size() == 2);
    CHECK(edits[0].text == "We added a comparison with BM25 on MS MARCO in Table 2.");
    CHECK(edits[0].section == "Experiments");
    CHECK(edits[1].text == "Results are now averaged over five random seeds.");
}

}  // TEST_SUITE
