#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "respkit/corpus/model.hpp"
#include "respkit/providers/provider.hpp"

namespace respkit::align {

struct TripletConfig {
    double fuzzy_min = 60.0;
    double embed_min = 20.0;
    double bigram_min = 10.0;
    bool classifier_enabled = false;
    /// Upper bound on pairs scored concurrently (and so on concurrent provider calls).
    std::size_t max_in_flight = 4;

    void validate() const;
};

/// Old sentence, a newline, then the new sentence. A missing side contributes "".
/// Throws ValidationError for ids that do not resolve.
std::string edit_text(const corpus::SentenceEdit& e, const corpus::Corpus& corpus);

/// 100 * |bigrams(s1) ∩ bigrams(s2)| / |bigrams(s1)| over distinct lowercase word bigrams.
/// Zero when s1 has fewer than two tokens.
double bigram_overlap(std::string_view s1, std::string_view s2);

struct SimScores {
    double fuzzy = 0.0;
    std::optional<double> embed;  ///< absent when no embedder is configured
    double bigram = 0.0;
};

/// The similarity rule on precomputed scores. A missing embedding score drops that condition.
bool sim_rule(const SimScores& s, const TripletConfig& cfg);

SimScores sim_scores(std::string_view s1, std::string_view edit_text, providers::Embedder* embedder);

/// fuzzy >= fuzzy_min and embed >= embed_min and bigram >= bigram_min against edit_text(e).
bool sim_align(std::string_view s1, const corpus::SentenceEdit& e, const corpus::Corpus& corpus,
               providers::Embedder* embedder, const TripletConfig& cfg);

struct TripletAlignment {
    std::vector<corpus::Re3Triplet> triplets;
    std::vector<std::string> warnings;
};

/// For each pair, tests review sentences (CE) and response sentences (AE) against every edit
/// of the pair's paper with the similarity rule and, when enabled, the classifiers. The union
/// of positives, ordered by edit ordinal, forms the triplet; pairs with no aligned edit are
/// dropped. A classifier failure marks the pair degraded and keeps the similarity results.
/// Embedder failures propagate.
TripletAlignment align_triplets(const std::vector<corpus::ReviewResponsePair>& pairs, const corpus::Corpus& corpus,
                                providers::Embedder* embedder, providers::PairClassifier* ce_classifier,
                                providers::PairClassifier* ae_classifier, const TripletConfig& cfg);

}  // namespace respkit::align
