#include "respkit/align/triplet_align.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "respkit/align/fuzzy.hpp"
#include "respkit/error.hpp"
#include "respkit/util/parallel.hpp"
#include "respkit/util/text.hpp"

namespace respkit::align {

using corpus::AlignSource;
using corpus::Re3Triplet;
using corpus::SentenceEdit;

void TripletConfig::validate() const {
    for (double t : {fuzzy_min, embed_min, bigram_min}) {
        if (t < 0.0 || t > 100.0) throw ValidationError("triplet thresholds must lie in [0, 100]");
    }
}

std::string edit_text(const SentenceEdit& e, const corpus::Corpus& corpus) {
    std::string out;
    if (e.old_id) out += corpus.sentence_text(*e.old_id);
    out += '\n';
    if (e.new_id) out += corpus.sentence_text(*e.new_id);
    return out;
}

namespace {

// Bigrams never span a line break, so the old and new halves of an edit text are
// tokenized separately.
std::set<std::pair<std::string, std::string>> bigrams(std::string_view s, std::size_t* tokens = nullptr) {
    std::set<std::pair<std::string, std::string>> out;
    std::size_t count = 0;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t nl = s.find('\n', start);
        if (nl == std::string_view::npos) nl = s.size();
        auto toks = text::word_tokens(s.substr(start, nl - start));
        count += toks.size();
        for (std::size_t i = 0; i + 1 < toks.size(); ++i) out.emplace(toks[i], toks[i + 1]);
        start = nl + 1;
    }
    if (tokens) *tokens = count;
    return out;
}

}  // namespace

double bigram_overlap(std::string_view s1, std::string_view s2) {
    std::size_t n = 0;
    auto a = bigrams(s1, &n);
    if (n < 2 || a.empty()) return 0.0;
    auto b = bigrams(s2);
    std::size_t shared = 0;
    for (const auto& bg : a) shared += b.count(bg);
    return 100.0 * static_cast<double>(shared) / static_cast<double>(a.size());
}

bool sim_rule(const SimScores& s, const TripletConfig& cfg) {
    return s.fuzzy >= cfg.fuzzy_min && (!s.embed || *s.embed >= cfg.embed_min) && s.bigram >= cfg.bigram_min;
}

SimScores sim_scores(std::string_view s1, std::string_view etext, providers::Embedder* embedder) {
    SimScores s;
    s.fuzzy = partial_ratio(s1, etext);
    s.bigram = bigram_overlap(s1, etext);
    if (embedder) s.embed = providers::semantic_similarity(*embedder, std::string(s1), std::string(etext));
    return s;
}

bool sim_align(std::string_view s1, const SentenceEdit& e, const corpus::Corpus& corpus,
               providers::Embedder* embedder, const TripletConfig& cfg) {
    return sim_rule(sim_scores(s1, edit_text(e, corpus), embedder), cfg);
}

namespace {

struct PaperEdits {
    std::vector<const SentenceEdit*> edits;
    std::vector<std::string> texts;
    std::vector<providers::Vector> vectors;
};

}  // namespace

TripletAlignment align_triplets(const std::vector<corpus::ReviewResponsePair>& pairs, const corpus::Corpus& corpus,
                                providers::Embedder* embedder, providers::PairClassifier* ce_classifier,
                                providers::PairClassifier* ae_classifier, const TripletConfig& cfg) {
    cfg.validate();
    TripletAlignment result;
    if (!embedder) result.warnings.push_back("triplet alignment: embedding condition dropped (no embedder configured)");
    bool use_ce = cfg.classifier_enabled && ce_classifier;
    bool use_ae = cfg.classifier_enabled && ae_classifier;
    if (cfg.classifier_enabled && (!ce_classifier || !ae_classifier))
        result.warnings.push_back("triplet alignment: classifier enabled but not configured for CE and AE");

    std::map<std::string, PaperEdits> papers;
    for (const auto& p : pairs) {
        if (papers.count(p.paper_id)) continue;
        const auto* bundle = corpus.find_paper(p.paper_id);
        if (!bundle) throw ValidationError("pair " + p.pair_id + " references unknown paper '" + p.paper_id + "'");
        PaperEdits pe;
        pe.edits = corpus.edits_of(*bundle);
        for (const auto* e : pe.edits) pe.texts.push_back(edit_text(*e, corpus));
        if (embedder && !pe.texts.empty()) {
            pe.vectors = embedder->embed(pe.texts);
            if (pe.vectors.size() != pe.texts.size())
                throw ProtocolError("embedder returned a different number of vectors");
        }
        papers.emplace(p.paper_id, std::move(pe));
    }

    std::vector<std::optional<Re3Triplet>> slots(pairs.size());
    util::parallel_for(pairs.size(), std::max<std::size_t>(1, cfg.max_in_flight), [&](std::size_t k) {
        const auto& pair = pairs[k];
        const auto& pe = papers.at(pair.paper_id);
        if (pe.edits.empty()) return;

        struct Side {
            AlignSource sim, cls;
            providers::PairClassifier* classifier;
            std::vector<std::string> texts;
        };
        std::vector<Side> sides{{AlignSource::CeSim, AlignSource::CeCls, use_ce ? ce_classifier : nullptr, {}},
                                {AlignSource::AeSim, AlignSource::AeCls, use_ae ? ae_classifier : nullptr, {}}};
        for (const auto& id : pair.review_sentences) sides[0].texts.push_back(corpus.sentence_text(id));
        for (const auto& id : pair.response_sentences) sides[1].texts.push_back(corpus.sentence_text(id));

        std::vector<corpus::Provenance> prov(pe.edits.size());
        Re3Triplet t;
        t.pair = pair;
        for (auto& side : sides) {
            std::vector<providers::Vector> vecs;
            if (embedder && !side.texts.empty()) {
                vecs = embedder->embed(side.texts);
                if (vecs.size() != side.texts.size())
                    throw ProtocolError("embedder returned a different number of vectors");
            }
            bool classifier_ok = side.classifier != nullptr;
            for (std::size_t s = 0; s < side.texts.size(); ++s) {
                for (std::size_t e = 0; e < pe.edits.size(); ++e) {
                    SimScores sc;
                    sc.fuzzy = partial_ratio(side.texts[s], pe.texts[e]);
                    sc.bigram = bigram_overlap(side.texts[s], pe.texts[e]);
                    if (embedder) sc.embed = providers::similarity_0_100(vecs[s], pe.vectors[e]);
                    if (sim_rule(sc, cfg)) prov[e].add(side.sim);
                    if (!classifier_ok) continue;
                    try {
                        if (side.classifier->classify(side.texts[s], pe.texts[e]).positive) prov[e].add(side.cls);
                    } catch (const ProviderError& err) {
                        classifier_ok = false;
                        t.degraded = true;
                        t.errors.push_back(std::string(to_string(side.cls)) + ": " + err.what());
                    }
                }
            }
        }
        for (std::size_t e = 0; e < pe.edits.size(); ++e) {
            if (prov[e].empty()) continue;
            t.aligned_edits.push_back({pe.edits[e]->edit_id, pe.edits[e]->ordinal, prov[e]});
        }
        std::sort(t.aligned_edits.begin(), t.aligned_edits.end(),
                  [](const auto& a, const auto& b) { return a.ordinal < b.ordinal; });
        if (!t.aligned_edits.empty()) slots[k] = std::move(t);
    });

    for (auto& s : slots) {
        if (!s) continue;
        if (s->degraded) result.warnings.push_back("pair " + s->pair.pair_id + ": classifier failed; degraded");
        result.triplets.push_back(std::move(*s));
    }
    return result;
}

}  // namespace respkit::align
