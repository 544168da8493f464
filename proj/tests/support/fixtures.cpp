#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "oracles.hpp"
#include "respkit/corpus/io.hpp"

namespace fixtures {

namespace fs = std::filesystem;
using namespace respkit;
using corpus::DocKind;

fs::path golden_dir() { return fs::path(RESPKIT_TEST_DATA_DIR) / "golden"; }

gen::GenerationRequest canonical_request(gen::Setting s) {
    gen::GenerationRequest r;
    r.setting = s;
    r.pair_id = "canonical";
    r.review_segment =
        "The evaluation lacks a comparison with recent retrieval baselines. How does the method scale to longer "
        "documents? Please report variance across random seeds.";
    r.author_edits = {
        {"We added a comparison with BM25 and DPR baselines in Table 4.",
         "We compare against sparse and dense retrievers. We added a comparison with BM25 and DPR baselines in "
         "Table 4.",
         "Experiments"},
        {"Results are averaged over five random seeds with standard deviations reported.",
         "Results are averaged over five random seeds with standard deviations reported.", "Results"},
    };
    r.v1_paragraphs = std::vector<std::string>{
        "Method\nOur retriever encodes passages with a shared encoder.",
        "Experiments\nWe evaluate on three benchmarks with documents up to 512 tokens.",
    };
    r.length_limit = 150;
    r.review_items = std::vector<corpus::ReviewItem>{
        {"C1", ItemType::Criticism, "The evaluation lacks a comparison with recent retrieval baselines."},
        {"Q1", ItemType::Question, "How does the method scale to longer documents?"},
        {"R1", ItemType::Request, "Please report variance across random seeds."},
    };
    corpus::ResponsePlan plan;
    plan.items = {
        {"C1", {ResponseAction::ConcedeCriticism, ResponseAction::TaskHasBeenDone}},
        {"Q1", {ResponseAction::AnswerQuestion}},
        {"R1", {ResponseAction::TaskWillBeDoneInNextVersion}},
    };
    r.plan = plan;
    r.prior_draft = "Thank you for the comment. We added BM25 and DPR baselines.";

    eval::EvalReport rep;
    rep.pair_id = "canonical";
    rep.setting = "S6";
    eval::QualityBlock q;
    q.raw = {4, 3, 3};
    for (std::size_t i = 0; i < 3; ++i) q.normalized[i] = q.raw[i] / 5.0;
    q.justifications[0] = {{"addresses the baseline concern"}, {"ignores the scaling question"}};
    q.justifications[1] = {{}, {"no numbers reported"}};
    q.justifications[2] = {{"clear"}, {}};
    q.suggestions[0] = {"answer the scaling question"};
    q.suggestions[1] = {"report the Table 4 numbers"};
    rep.quality = q;
    eval::FactSummary g;
    g.n = 50;
    g.supported = 0.62;
    g.unsupported = 0.38;
    g.empty = false;
    rep.gfp = g;
    r.prior_eval = rep;
    r.venue_mode = corpus::Venue::Conference;
    return r;
}

int StubEmbedder::bucket(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) h = (h ^ c) * 1099511628211ULL;
    return static_cast<int>(h % 26);
}

double StubEmbedder::similarity(const std::string& a, const std::string& b) {
    double deg = 7.0 * (bucket(a) - bucket(b));
    return 100.0 * std::max(0.0, std::cos(deg * M_PI / 180.0));
}

std::vector<providers::Vector> StubEmbedder::embed(std::span<const std::string> texts) {
    std::vector<providers::Vector> out;
    for (const auto& t : texts) {
        double rad = 7.0 * bucket(t) * M_PI / 180.0;
        out.push_back({static_cast<float>(std::cos(rad)), static_cast<float>(std::sin(rad))});
    }
    return out;
}

corpus::DocumentGraph make_doc(const std::string& doc_id, const std::string& paper_id, DocKind kind,
                               const std::vector<std::string>& sentences) {
    corpus::DocumentGraph d;
    d.doc_id = doc_id;
    d.paper_id = paper_id;
    d.kind = kind;
    corpus::Section sec;
    corpus::Paragraph par;
    for (std::size_t i = 0; i < sentences.size(); ++i)
        par.sentences.push_back({doc_id + ".s" + std::to_string(i), sentences[i]});
    sec.paragraphs.push_back(std::move(par));
    d.sections.push_back(std::move(sec));
    return d;
}

namespace {

const std::vector<std::string> kReview{
    "The paper does not compare against recent retrieval baselines.",
    "It is unclear how the method scales to documents longer than the training length.",
    "The ablation study omits the effect of the reranking stage.",
    "Please report variance across random seeds for the main table.",
    "Several figures lack axis labels and units.",
};

const std::vector<std::string> kAnswers{
    "We added BM25 and DPR comparisons to Table 4.",
    "Both baselines trail our system by at least three points.",
    "Our encoder processes inputs in overlapping windows.",
    "Runtime grows linearly with input size in our measurements.",
    "Section 5 now includes a breakdown without the second stage.",
    "Removing that component lowers accuracy by two points.",
    "All numbers are now averaged over five seeds.",
    "Standard deviations appear next to each mean.",
    "We redrew every plot with labeled axes.",
    "Units are given in the captions as well.",
};

std::string quoted(std::size_t i) { return "> " + kReview[i]; }
const std::string& ans(std::size_t i) { return kAnswers[i]; }

std::vector<std::string> fillers(std::size_t n) {
    static const std::vector<std::string> words{"tokenizer", "warmup", "dropout", "batching", "pruning",
                                                "caching", "sharding", "logging"};
    std::vector<std::string> out;
    for (std::size_t k = 0; k < n; ++k)
        out.push_back("Detail " + std::to_string(k + 1) + " of our reply covers the " + words[k % words.size()] +
                      " setup in version " + std::to_string(k + 2) + ".");
    return out;
}

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

const std::vector<PairCase>& pair_cases() {
    static const std::vector<PairCase> cases{
        {"quote, two answers, quote, three answers",
         kReview,
         {quoted(0), ans(0), ans(1), quoted(1), ans(2), ans(3), ans(4)},
         {{0, 1, 1, 3}, {1, 2, 4, 7}}},
        {"one-sentence segment is dropped",
         kReview,
         {quoted(0), ans(0), quoted(3), ans(6), ans(7)},
         {{3, 4, 3, 5}}},
        {"no quotes",
         kReview,
         {ans(0), ans(1), ans(2), ans(3)},
         {}},
        {"straight quotes and Q-number markers",
         kReview,
         {"\"" + kReview[2] + "\"", ans(4), ans(5), "Q2: " + kReview[1], ans(2), ans(3)},
         {{2, 3, 1, 3}, {1, 2, 4, 6}}},
        {"numbered and parenthesized markers",
         kReview,
         {"1. " + kReview[3], ans(6), ans(7), "(2) " + kReview[4], ans(8), ans(9)},
         {{3, 4, 1, 3}, {4, 5, 4, 6}}},
        {"two quoted sentences form one span",
         kReview,
         {quoted(0), quoted(1), ans(0), ans(1), ans(2)},
         {{0, 2, 2, 5}}},
        {"fifteen-sentence segment is kept",
         kReview,
         cat({quoted(2)}, fillers(15)),
         {{2, 3, 1, 16}}},
        {"sixteen-sentence segment is dropped",
         kReview,
         cat({quoted(2)}, fillers(16)),
         {}},
        {"quoted fragment contained in a review sentence",
         kReview,
         {"> The ablation study omits the effect", ans(4), ans(5)},
         {{2, 3, 1, 3}}},
        {"quote with typos matches by partial ratio",
         kReview,
         {"> The paper does not compare agianst recnet retrieval baselines.", ans(0), ans(1)},
         {{0, 1, 1, 3}}},
        {"preamble and a non-contiguous quote run",
         kReview,
         {"We thank the reviewer for the careful reading.", quoted(0), quoted(2), ans(0), ans(1), ans(5)},
         {{0, 1, 3, 6}}},
        {"three quotes with a short middle segment",
         kReview,
         {quoted(0), ans(0), ans(1), quoted(1), ans(2), quoted(3), ans(6), ans(7)},
         {{0, 1, 1, 3}, {3, 4, 6, 8}}},
    };
    return cases;
}

TripletCase random_triplet_case(std::mt19937_64& rng, std::size_t max_edits) {
    static const std::vector<std::string> vocab{"model", "baseline", "table", "results", "seeds", "variance",
                                                "encoder", "retrieval", "dataset", "training", "we", "the",
                                                "report", "added", "improves", "section"};
    auto pick = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    auto sentence = [&] {
        std::string s;
        std::size_t n = pick(3, 9);
        for (std::size_t i = 0; i < n; ++i) {
            if (i) s += ' ';
            s += vocab[pick(0, vocab.size() - 1)];
        }
        return s + ".";
    };
    auto mutate = [&](std::string s) {
        auto toks = s.substr(0, s.size() - 1);
        std::vector<std::string> w;
        std::size_t start = 0;
        while (start <= toks.size()) {
            auto sp = toks.find(' ', start);
            w.push_back(toks.substr(start, sp == std::string::npos ? std::string::npos : sp - start));
            if (sp == std::string::npos) break;
            start = sp + 1;
        }
        std::size_t changes = pick(0, 2);
        for (std::size_t c = 0; c < changes; ++c) w[pick(0, w.size() - 1)] = vocab[pick(0, vocab.size() - 1)];
        std::string out;
        for (std::size_t i = 0; i < w.size(); ++i) out += (i ? " " : "") + w[i];
        return out + ".";
    };

    std::size_t n_edits = pick(0, max_edits);
    std::vector<std::string> v1, v2;
    struct Plan {
        int old_idx = -1, new_idx = -1;
    };
    std::vector<Plan> plans;
    for (std::size_t e = 0; e < n_edits; ++e) {
        Plan p;
        std::size_t kind = pick(0, 2);
        if (kind != 1) {
            p.old_idx = static_cast<int>(v1.size());
            v1.push_back(sentence());
        }
        if (kind != 2) {
            p.new_idx = static_cast<int>(v2.size());
            v2.push_back(p.old_idx >= 0 ? mutate(v1.back()) : sentence());
        }
        plans.push_back(p);
    }
    v1.push_back(sentence());
    v2.push_back(sentence());

    auto draw = [&] {
        std::size_t choice = pick(0, 3);
        if (choice == 0 && !v2.empty()) return mutate(v2[pick(0, v2.size() - 1)]);
        if (choice == 1 && !v1.empty()) return mutate(v1[pick(0, v1.size() - 1)]);
        return sentence();
    };
    std::vector<std::string> review, response;
    for (std::size_t i = 0, n = pick(2, 6); i < n; ++i) review.push_back(draw());
    for (std::size_t i = 0, n = pick(2, 8); i < n; ++i) response.push_back(draw());

    corpus::CorpusBuilder b;
    b.add_document(make_doc("v1", "P", DocKind::PaperV1, v1));
    b.add_document(make_doc("v2", "P", DocKind::PaperV2, v2));
    b.add_document(make_doc("rev", "P", DocKind::Review, review));
    b.add_document(make_doc("resp", "P", DocKind::Response, response));
    for (std::size_t e = 0; e < plans.size(); ++e) {
        corpus::SentenceEdit se;
        se.edit_id = "e" + std::to_string(e);
        if (plans[e].old_idx >= 0) se.old_id = "v1.s" + std::to_string(plans[e].old_idx);
        if (plans[e].new_idx >= 0) se.new_id = "v2.s" + std::to_string(plans[e].new_idx);
        se.action = !se.old_id ? "Add" : !se.new_id ? "Delete" : "Modify";
        se.intent = "Other";
        b.add_edit(std::move(se));
    }
    TripletCase tc{std::move(b).build(), {}};

    // Two pairs over disjoint review/response slices.
    auto slice_ids = [](const std::string& doc, std::size_t from, std::size_t to) {
        std::vector<std::string> ids;
        for (std::size_t i = from; i < to; ++i) ids.push_back(doc + ".s" + std::to_string(i));
        return ids;
    };
    std::size_t rc = review.size() / 2, ac = response.size() / 2;
    tc.pairs.push_back({"resp:p0", "P", "rev", "resp", "R1", slice_ids("rev", 0, rc), slice_ids("resp", 0, ac)});
    tc.pairs.push_back({"resp:p1", "P", "rev", "resp", "R1", slice_ids("rev", rc, review.size()),
                        slice_ids("resp", ac, response.size())});
    return tc;
}

corpus::Corpus pipeline_corpus() {
    struct Topic {
        std::string method, baseline, dataset;
    };
    const std::vector<Topic> topics{
        {"GraphRank", "BM25", "MS MARCO"},
        {"SpanNet", "BERT-CRF", "CoNLL"},
        {"TreeSum", "PEGASUS", "XSum"},
        {"FlowQA", "DrQA", "SQuAD"},
        {"LexAlign", "fast_align", "Europarl"},
    };
    corpus::CorpusBuilder b;
    for (std::size_t k = 0; k < topics.size(); ++k) {
        const auto& t = topics[k];
        std::string pid = "paper" + std::to_string(k);
        auto doc = [&](const std::string& id, DocKind kind,
                       const std::vector<std::pair<std::string, std::vector<std::string>>>& sections) {
            corpus::DocumentGraph d;
            d.doc_id = pid + "." + id;
            d.paper_id = pid;
            d.kind = kind;
            d.venue = k % 2 ? corpus::Venue::Journal : corpus::Venue::Conference;
            std::size_t n = 0;
            for (const auto& [title, sents] : sections) {
                corpus::Section sec;
                sec.title = title;
                corpus::Paragraph par;
                for (const auto& s : sents) par.sentences.push_back({d.doc_id + ".s" + std::to_string(n++), s});
                sec.paragraphs.push_back(std::move(par));
                d.sections.push_back(std::move(sec));
            }
            return d;
        };
        std::string old_eval = "We evaluate " + t.method + " on " + t.dataset + ".";
        std::string new_eval = "We added a comparison with " + t.baseline + " on " + t.dataset + " in Table 2.";
        std::string seeds = "Results are now averaged over five random seeds.";
        b.add_document(doc("v1", DocKind::PaperV1,
                           {{"Method", {t.method + " encodes each input with a shared encoder.",
                                        "Training uses a contrastive objective."}},
                            {"Experiments", {old_eval, "Accuracy is the main metric."}}}));
        b.add_document(doc("v2", DocKind::PaperV2,
                           {{"Method", {t.method + " encodes each input with a shared encoder.",
                                        "Training uses a contrastive objective."}},
                            {"Experiments", {new_eval, "Accuracy is the main metric.", seeds}}}));
        std::vector<std::string> review{
            "The experiments lack a comparison with " + t.baseline + " on " + t.dataset + ".",
            "Are the reported gains stable across random seeds?",
            "Please also discuss the training cost of " + t.method + ".",
        };
        auto rev = doc("review", DocKind::Review, {{"", review}});
        rev.reviewer_id = "R1";
        b.add_document(rev);
        auto resp = doc("response", DocKind::Response,
                        {{"", {"> " + review[0], new_eval, "The new numbers confirm the advantage of " + t.method + ".",
                               "> " + review[1], seeds, "The standard deviation stays below half a point."}}});
        resp.reviewer_id = "R1";
        resp.in_reply_to = rev.doc_id;
        b.add_document(resp);
        corpus::SentenceEdit modify;
        modify.old_id = pid + ".v1.s2";
        modify.new_id = pid + ".v2.s2";
        modify.action = "Modify";
        modify.intent = "Fact/Evidence";
        b.add_edit(modify);
        corpus::SentenceEdit add;
        add.new_id = pid + ".v2.s4";
        add.action = "Add";
        add.intent = "Fact/Evidence";
        b.add_edit(add);
    }
    return std::move(b).build();
}

void write_corpus(const corpus::Corpus& c, const fs::path& dir) {
    fs::create_directories(dir);
    std::ofstream(dir / "corpus.jsonl") << corpus::serialize_corpus(c);
}

fs::path temp_dir(const std::string& tag) {
    static std::mt19937_64 rng{std::random_device{}()};
    auto p = fs::temp_directory_path() / ("respkit-test-" + tag + "-" + std::to_string(rng() % 1000000000));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::vector<OracleLink> triplet_oracle(const TripletCase& tc, double fuzzy_min, double embed_min, double bigram_min) {
    const auto& c = tc.corpus;
    auto text = [&](const std::optional<std::string>& id) { return id ? c.sentence_text(*id) : std::string(); };
    auto passes = [&](const std::string& s1, const std::string& edit) {
        return oracle::partial_ratio(s1, edit) >= fuzzy_min && StubEmbedder::similarity(s1, edit) >= embed_min &&
               oracle::bigram_overlap(s1, edit) >= bigram_min;
    };
    std::vector<OracleLink> out;
    for (const auto& p : tc.pairs) {
        std::vector<const corpus::SentenceEdit*> edits;
        for (const auto& e : c.edits()) {
            auto in_paper = [&](const std::optional<std::string>& id) {
                if (!id) return false;
                auto loc = c.locate(*id);
                return loc && c.documents()[loc->document].paper_id == p.paper_id;
            };
            if (in_paper(e.old_id) || in_paper(e.new_id)) edits.push_back(&e);
        }
        std::sort(edits.begin(), edits.end(), [](auto* a, auto* b) { return a->ordinal < b->ordinal; });
        for (const auto* e : edits) {
            std::string et = text(e->old_id) + "\n" + text(e->new_id);
            OracleLink link{p.pair_id, e->edit_id};
            for (const auto& id : p.review_sentences) link.ce = link.ce || passes(c.sentence_text(id), et);
            for (const auto& id : p.response_sentences) link.ae = link.ae || passes(c.sentence_text(id), et);
            if (link.ce || link.ae) out.push_back(link);
        }
    }
    return out;
}

std::vector<OracleLink> links_of(const std::vector<corpus::Re3Triplet>& triplets) {
    std::vector<OracleLink> out;
    for (const auto& t : triplets)
        for (const auto& e : t.aligned_edits)
            out.push_back({t.pair.pair_id, e.edit_id, e.provenance.has(corpus::AlignSource::CeSim),
                           e.provenance.has(corpus::AlignSource::AeSim)});
    return out;
}

}  // namespace fixtures
