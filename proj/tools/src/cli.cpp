#include "respkit/service/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "respkit/align/pair_align.hpp"
#include "respkit/align/triplet_align.hpp"
#include "respkit/corpus/io.hpp"
#include "respkit/error.hpp"
#include "respkit/eval/evaluate.hpp"
#include "respkit/gen/engine.hpp"
#include "respkit/retrieval/retrieval.hpp"
#include "respkit/service/config.hpp"
#include "respkit/service/factory.hpp"
#include "respkit/service/server.hpp"
#include "respkit/service/session.hpp"
#include "respkit/util/text.hpp"

namespace respkit::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Config load_or_default(const std::string& path) { return path.empty() ? Config{} : load_config(path); }

std::string file_stem_for(const std::string& pair_id, const std::string& setting) {
    std::string out;
    for (char c : pair_id) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '.';
        out += ok ? c : '_';
    }
    return out + "__" + setting;
}

json error_json(const std::exception& e) {
    json err = {{"message", e.what()}};
    if (auto* rv = dynamic_cast<const RequestValidationError*>(&e)) {
        err["type"] = "request_validation";
        err["field"] = rv->field();
    } else if (auto* pe = dynamic_cast<const ParseError*>(&e)) {
        err["type"] = "parse";
        err["file"] = pe->file();
        err["line"] = pe->line();
    } else if (auto* pr = dynamic_cast<const ProviderError*>(&e)) {
        err["type"] = dynamic_cast<const ProtocolError*>(&e) ? "protocol" : "provider";
        err["audit_id"] = pr->audit_id();
        err["retriable"] = pr->retriable();
    } else if (dynamic_cast<const SchemaError*>(&e)) {
        err["type"] = "schema";
    } else if (dynamic_cast<const ValidationError*>(&e)) {
        err["type"] = "validation";
    } else {
        err["type"] = "error";
    }
    return {{"error", err}};
}

struct GenerationRecord {
    gen::GenerationRequest request;
    gen::GenerationResult result;
};

std::vector<GenerationRecord> read_generations(const fs::path& file) {
    std::vector<GenerationRecord> out;
    std::size_t line = 0;
    for (const auto& j : corpus::read_jsonl(file)) {
        ++line;
        if (!j.contains("request") || !j.contains("result"))
            throw ParseError(file.string(), line, "generation record needs 'request' and 'result'");
        out.push_back({gen::request_from_json(j["request"]), gen::result_from_json(j["result"])});
    }
    return out;
}

json record_json(const gen::GenerationRequest& req, const gen::GenerationResult& res) {
    return {{"request", gen::to_json(req)}, {"result", gen::to_json(res)}};
}

std::string segment_text(const std::vector<std::string>& sentence_ids, const corpus::Corpus& corpus) {
    std::vector<std::string> texts;
    for (const auto& id : sentence_ids) texts.push_back(corpus.sentence_text(id));
    return text::join(texts, " ");
}

std::vector<corpus::Re3Triplet> read_triplets(const fs::path& file) {
    std::vector<corpus::Re3Triplet> out;
    for (const auto& j : corpus::read_jsonl(file)) out.push_back(corpus::triplet_from_json(j));
    return out;
}

struct GenerateArgs {
    std::string setting;
    std::string requests;
    std::string corpus;
    std::string triplets;
    std::string retrieved;
    std::string plans;
    std::string limit;
    std::string venue;
    std::string out;
};

std::optional<std::size_t> numeric_limit(const std::string& s) {
    if (s.empty() || s == "auto") return std::nullopt;
    std::size_t used = 0;
    long long v = -1;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
    }
    if (used != s.size() || v < 0) throw RequestValidationError("length_limit", "--limit must be a word count or 'auto'");
    return static_cast<std::size_t>(v);
}

std::vector<gen::GenerationRequest> build_requests(const GenerateArgs& a) {
    std::optional<gen::Setting> setting;
    if (!a.setting.empty()) {
        setting = gen::parse_setting(a.setting);
        if (!setting) throw RequestValidationError("setting", "unknown setting '" + a.setting + "'");
    }
    std::optional<corpus::Venue> venue;
    if (!a.venue.empty()) {
        venue = corpus::parse_venue(a.venue);
        if (!venue) throw RequestValidationError("venue", "--venue must be conference or journal");
    }
    auto limit = numeric_limit(a.limit);
    std::vector<gen::GenerationRequest> reqs;

    if (!a.requests.empty()) {
        if (a.limit == "auto") throw RequestValidationError("length_limit", "--limit auto needs --corpus and --triplets");
        for (const auto& j : corpus::read_jsonl(a.requests)) {
            auto r = gen::request_from_json(j);
            if (setting) r.setting = *setting;
            if (limit) r.length_limit = limit;
            if (venue) r.venue_mode = *venue;
            reqs.push_back(std::move(r));
        }
    } else {
        if (a.corpus.empty() || a.triplets.empty())
            throw RequestValidationError("requests", "give --requests, or --corpus with --triplets");
        if (!setting) throw RequestValidationError("setting", "--setting is required with --corpus");
        auto corpus = corpus::load_corpus(a.corpus);
        std::map<std::string, std::vector<std::string>> retrieved;
        if (!a.retrieved.empty())
            for (const auto& j : corpus::read_jsonl(a.retrieved)) {
                auto& list = retrieved[j.at("pair_id").get<std::string>()];
                for (const auto& p : j.at("paragraphs")) list.push_back(p.at("text").get<std::string>());
            }
        std::map<std::string, json> plans;
        if (!a.plans.empty())
            for (const auto& j : corpus::read_jsonl(a.plans)) plans[j.at("pair_id").get<std::string>()] = j;

        for (const auto& t : read_triplets(a.triplets)) {
            gen::GenerationRequest r;
            r.setting = *setting;
            r.pair_id = t.pair.pair_id;
            r.review_segment = segment_text(t.pair.review_sentences, corpus);
            if (gen::needs_edits(r.setting)) r.author_edits = gen::author_edits_for(t, corpus);
            if (auto it = retrieved.find(r.pair_id); it != retrieved.end()) r.v1_paragraphs = it->second;
            if (a.limit == "auto")
                r.length_limit = gen::default_length_limit(text::word_count(segment_text(t.pair.response_sentences, corpus)));
            else
                r.length_limit = limit;
            if (auto it = plans.find(r.pair_id); it != plans.end()) {
                json sub = {{"setting", "S1"}};
                for (const char* key : {"plan", "review_items"})
                    if (it->second.contains(key)) sub[key] = it->second[key];
                auto decoded = gen::request_from_json(sub);
                r.plan = decoded.plan;
                r.review_items = decoded.review_items;
            }
            if (venue) {
                r.venue_mode = *venue;
            } else if (const auto* paper = corpus.find_paper(t.pair.paper_id); paper && paper->venue) {
                r.venue_mode = *paper->venue;
            }
            reqs.push_back(std::move(r));
        }
    }
    for (const auto& r : reqs) gen::validate(r);
    return reqs;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"respkit: rebuttal pipeline toolkit"};
    app.require_subcommand(1);
    app.name(args.empty() ? "respkit" : fs::path(args[0]).filename().string());

    std::string config_path;
    auto with_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "TOML-style provider and threshold configuration")->check(CLI::ExistingFile);
    };

    // extract-pairs
    auto* extract = app.add_subcommand("extract-pairs", "Align quoted review spans with response segments");
    std::string corpus_dir, out_path, pairs_path;
    extract->add_option("--corpus", corpus_dir, "Corpus directory of JSONL files")->required()->check(CLI::ExistingDirectory);
    extract->add_option("--out", out_path, "Output pairs JSONL")->required();
    bool no_embedder = false;
    extract->add_flag("--no-embedder", no_embedder, "Skip the embedding similarity condition");
    with_config(extract);

    // align-triplets
    auto* align = app.add_subcommand("align-triplets", "Link review-response pairs to paper edits");
    std::string triplets_path;
    align->add_option("--corpus", corpus_dir, "Corpus directory")->required()->check(CLI::ExistingDirectory);
    align->add_option("--pairs", pairs_path, "Pairs JSONL from extract-pairs")->required()->check(CLI::ExistingFile);
    align->add_option("--out", out_path, "Output triplets JSONL")->required();
    with_config(align);

    // retrieve
    auto* retrieve = app.add_subcommand("retrieve", "Retrieve first-version paragraphs for each triplet");
    retrieve->add_option("--corpus", corpus_dir, "Corpus directory")->required()->check(CLI::ExistingDirectory);
    retrieve->add_option("--triplets", triplets_path, "Triplets JSONL")->required()->check(CLI::ExistingFile);
    retrieve->add_option("--out", out_path, "Output JSONL of retrieved paragraphs")->required();
    with_config(retrieve);

    // generate
    auto* generate = app.add_subcommand("generate", "Generate responses under one setting");
    GenerateArgs ga;
    generate->add_option("--setting", ga.setting, "S1..S9");
    generate->add_option("--requests", ga.requests, "JSONL of generation requests")->check(CLI::ExistingFile);
    generate->add_option("--corpus", ga.corpus, "Corpus directory (with --triplets)")->check(CLI::ExistingDirectory);
    generate->add_option("--triplets", ga.triplets, "Triplets JSONL")->check(CLI::ExistingFile);
    generate->add_option("--retrieved", ga.retrieved, "Output of retrieve")->check(CLI::ExistingFile);
    generate->add_option("--plans", ga.plans, "JSONL of {pair_id, review_items, plan}")->check(CLI::ExistingFile);
    generate->add_option("--limit", ga.limit, "Word limit, or 'auto' for human length + 50");
    generate->add_option("--venue", ga.venue, "conference or journal");
    generate->add_option("--out", ga.out, "Output generations JSONL")->required();
    with_config(generate);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score generations; one report file per pair and setting");
    std::string in_path;
    bool no_quality = false, no_facts = false, no_discourse = false;
    evaluate->add_option("--in", in_path, "Generations JSONL")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--out", out_path, "Output directory for reports")->required();
    evaluate->add_flag("--no-quality", no_quality, "Skip rubric judging");
    evaluate->add_flag("--no-factuality", no_facts, "Skip GFP and ICR");
    evaluate->add_flag("--no-discourse", no_discourse, "Skip annotation-based stance profiles");
    with_config(evaluate);

    // refine
    auto* refine = app.add_subcommand("refine", "Evaluate and refine generations");
    int rounds = 1;
    std::string target_setting;
    refine->add_option("--in", in_path, "Generations JSONL")->required()->check(CLI::ExistingFile);
    refine->add_option("--out", out_path, "Output refined generations JSONL")->required();
    refine->add_option("--rounds", rounds, "Refinement rounds")->check(CLI::Range(1, 10));
    refine->add_option("--setting", target_setting, "S8 or S9; defaults to S8 for S6 drafts and S9 for S7 drafts");
    with_config(refine);

    // report
    auto* report = app.add_subcommand("report", "Aggregate reports into a per-setting CSV table");
    report->add_option("--in", in_path, "Directory of report files or a JSONL file")->required()->check(CLI::ExistingPath);
    report->add_option("--out", out_path, "CSV file; stdout when omitted");

    // serve
    auto* serve = app.add_subcommand("serve", "Run the session HTTP service");
    ServerOptions so;
    std::string data_dir = "respkit-sessions";
    std::string static_dir;
    serve->add_option("--port", so.port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
    serve->add_option("--host", so.host, "Bind address");
    serve->add_option("--data", data_dir, "Session log directory");
    serve->add_option("--static", static_dir, "Browser bundle directory served at /")->check(CLI::ExistingDirectory);
    with_config(serve);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    if (argv.empty()) argv.push_back("respkit");
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        if (app.get_subcommands().empty()) err << app.help();
        return 2;
    }

    try {
        if (extract->parsed()) {
            auto cfg = load_or_default(config_path);
            auto ps = build_providers(cfg);
            auto corpus = corpus::load_corpus(corpus_dir);
            auto res = align::extract_all_pairs(corpus, no_embedder ? nullptr : ps.embedder.get(), cfg.pair_align);
            std::vector<json> rows;
            for (const auto& p : res.pairs) rows.push_back(corpus::pair_to_json(p, &corpus));
            corpus::write_jsonl(out_path, rows);
            out << json{{"pairs", res.pairs.size()}, {"warnings", res.warnings}}.dump() << '\n';
        } else if (align->parsed()) {
            auto cfg = load_or_default(config_path);
            auto ps = build_providers(cfg);
            auto corpus = corpus::load_corpus(corpus_dir);
            std::vector<corpus::ReviewResponsePair> pairs;
            for (const auto& j : corpus::read_jsonl(pairs_path)) pairs.push_back(corpus::pair_from_json(j));
            auto tcfg = cfg.triplet_align;
            if (!ps.ce_classifier && !ps.ae_classifier) tcfg.classifier_enabled = false;
            auto res = align::align_triplets(pairs, corpus, ps.embedder.get(), ps.ce_classifier.get(),
                                             ps.ae_classifier.get(), tcfg);
            std::vector<json> rows;
            for (const auto& t : res.triplets) rows.push_back(corpus::triplet_to_json(t, &corpus));
            corpus::write_jsonl(out_path, rows);
            out << json{{"triplets", res.triplets.size()}, {"warnings", res.warnings}}.dump() << '\n';
        } else if (retrieve->parsed()) {
            auto cfg = load_or_default(config_path);
            auto ps = build_providers(cfg);
            auto corpus = corpus::load_corpus(corpus_dir);
            std::vector<json> rows;
            std::vector<std::string> warnings;
            for (const auto& t : read_triplets(triplets_path)) {
                const auto* paper = corpus.find_paper(t.pair.paper_id);
                auto v1 = paper ? corpus.documents_of(*paper, corpus::DocKind::PaperV1)
                                : std::vector<const corpus::DocumentGraph*>{};
                if (v1.empty()) {
                    warnings.push_back(t.pair.pair_id + ": no first-version paper");
                    continue;
                }
                auto r = retrieval::retrieve_v1(segment_text(t.pair.review_sentences, corpus), *v1.front(),
                                                ps.embedder.get(), ps.reranker.get(), cfg.retrieval);
                json paras = json::array();
                for (const auto& x : r.results)
                    paras.push_back({{"section", x.paragraph.section},
                                     {"paragraph", x.paragraph.paragraph},
                                     {"section_title", x.paragraph.section_title},
                                     {"text", x.paragraph.text},
                                     {"score", x.score}});
                rows.push_back({{"pair_id", t.pair.pair_id},
                                {"paragraphs", paras},
                                {"degraded", r.degraded},
                                {"warnings", r.warnings}});
            }
            corpus::write_jsonl(out_path, rows);
            out << json{{"retrieved", rows.size()}, {"warnings", warnings}}.dump() << '\n';
        } else if (generate->parsed()) {
            auto cfg = load_or_default(config_path);
            auto reqs = build_requests(ga);
            auto ps = build_providers(cfg);
            auto outcomes = gen::generate_batch(reqs, *ps.generator, cfg.max_in_flight);
            std::vector<json> rows;
            json failures = json::array();
            for (std::size_t i = 0; i < outcomes.size(); ++i) {
                if (outcomes[i].result) rows.push_back(record_json(reqs[i], *outcomes[i].result));
                else failures.push_back({{"pair_id", outcomes[i].pair_id}, {"message", outcomes[i].error}});
            }
            corpus::write_jsonl(ga.out, rows);
            out << json{{"generated", rows.size()}, {"failed", failures.size()}}.dump() << '\n';
            if (!failures.empty()) {
                err << json{{"error", {{"type", "provider"}, {"message", "some generations failed"}, {"failures", failures}}}}.dump()
                    << '\n';
                return 1;
            }
        } else if (evaluate->parsed()) {
            auto cfg = load_or_default(config_path);
            auto ps = build_providers(cfg);
            eval::EvalOptions opts{!no_discourse, !no_quality, !no_facts};
            fs::create_directories(out_path);
            std::size_t n = 0;
            for (const auto& rec : read_generations(in_path)) {
                auto ev = eval::evaluate(rec.request, rec.result, ps.judges(), opts);
                std::ofstream f(fs::path(out_path) / (file_stem_for(ev.report.pair_id, ev.report.setting) + ".json"));
                f << eval::to_json(ev.report).dump(2) << '\n';
                ++n;
            }
            out << json{{"reports", n}}.dump() << '\n';
        } else if (refine->parsed()) {
            auto cfg = load_or_default(config_path);
            auto ps = build_providers(cfg);
            std::optional<gen::Setting> target;
            if (!target_setting.empty()) {
                target = gen::parse_setting(target_setting);
                if (!target || !gen::is_refinement(*target))
                    throw RequestValidationError("setting", "--setting must be S8 or S9");
            }
            auto judges = ps.judges();
            std::vector<json> rows;
            for (const auto& rec : read_generations(in_path)) {
                auto trace = gen::refine_loop(
                    rec.result, rec.request,
                    [&](const gen::GenerationResult& r) { return eval::evaluate(rec.request, r, judges).report; },
                    *ps.generator, rounds, target);
                const auto& last = trace.rounds.back();
                auto req = gen::refinement_request(last.draft, last.report, rec.request, target);
                auto row = record_json(req, trace.final_draft);
                row["rounds"] = trace.rounds.size();
                row["fixed_point"] = trace.fixed_point;
                rows.push_back(std::move(row));
            }
            corpus::write_jsonl(out_path, rows);
            out << json{{"refined", rows.size()}}.dump() << '\n';
        } else if (report->parsed()) {
            std::vector<eval::EvalReport> reports;
            auto take = [&](const json& j, const std::string& where) {
                auto r = eval::report_from_json(j);
                auto violations = eval::validate_report(r);
                if (!violations.empty()) throw ValidationError(where + ": " + violations.front());
                reports.push_back(std::move(r));
            };
            if (fs::is_directory(in_path)) {
                std::vector<fs::path> files;
                for (const auto& e : fs::directory_iterator(in_path))
                    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
                std::sort(files.begin(), files.end());
                for (const auto& f : files) {
                    std::ifstream in(f);
                    json j = json::parse(in, nullptr, false);
                    if (j.is_discarded()) throw ParseError(f.string(), 1, "report is not valid JSON");
                    take(j, f.string());
                }
            } else {
                std::size_t line = 0;
                for (const auto& j : corpus::read_jsonl(in_path)) take(j, in_path + ":" + std::to_string(++line));
            }
            auto csv = eval::to_csv(eval::aggregate(reports));
            if (out_path.empty()) {
                out << csv;
            } else {
                std::ofstream f(out_path);
                f << csv;
            }
        } else if (serve->parsed()) {
            auto cfg = load_or_default(config_path);
            auto svc = SessionService(std::make_shared<SessionStore>(fs::path(data_dir)), build_providers(cfg));
            if (!static_dir.empty()) so.static_dir = static_dir;
            HttpServer server(svc, so);
            int port = server.bind();
            if (port < 0) throw Error("cannot bind " + so.host + ":" + std::to_string(so.port));
            out << json{{"listening", so.host + ":" + std::to_string(port)}}.dump() << std::endl;
            server.serve();
        }
    } catch (const std::exception& e) {
        err << error_json(e).dump() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace respkit::service
