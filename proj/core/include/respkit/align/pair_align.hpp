#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "respkit/corpus/model.hpp"
#include "respkit/providers/provider.hpp"

namespace respkit::align {

struct MatchConfig {
    double t0_embed = 85.0;
    double t1_fuzzy = 85.0;
    std::size_t min_segment_sentences = 2;
    std::size_t max_segment_sentences = 15;
    /// Worker threads for the all-pairs match matrix.
    std::size_t threads = 1;

    /// Throws ValidationError when thresholds leave [0, 100] or min > max.
    void validate() const;
};

/// Strips leading quote markers ("> ", "Q:", "Q1:", "1.", "(2)", surrounding quotes),
/// collapses whitespace and lowercases ASCII.
std::string normalize_for_match(std::string_view sentence);

enum class MatchReason { None, Contains, Contained, Embedding, Fuzzy };

/// Evaluates the four matching conditions on normalized text, in order, and reports the
/// first that holds. With a null embedder the embedding condition is skipped.
MatchReason match_reason(std::string_view review_sentence, std::string_view response_sentence,
                         providers::Embedder* embedder, const MatchConfig& cfg);

bool sentences_match(std::string_view review_sentence, std::string_view response_sentence,
                     providers::Embedder* embedder, const MatchConfig& cfg);

/// matrix[i][j]: review sentence i matches response sentence j.
using MatchMatrix = std::vector<std::vector<bool>>;

/// Computes the full review x response match matrix. Embeddings are requested in one
/// batch per document.
MatchMatrix match_matrix(const std::vector<std::string>& review, const std::vector<std::string>& response,
                         providers::Embedder* embedder, const MatchConfig& cfg);

struct SpanPair {
    std::size_t review_begin = 0, review_end = 0;      ///< [begin, end) in the review
    std::size_t quote_begin = 0, quote_end = 0;        ///< quoted run in the response
    std::size_t segment_begin = 0, segment_end = 0;    ///< answering segment in the response
};

/// Turns a match matrix into quoted spans and their segments.
/// Quoted spans are maximal runs of matched response sentences. A run's review span is the
/// longest contiguous run of review sentences matched by it (earliest on ties). The segment
/// runs from the end of a quote to the next quote or the end of the response and is kept
/// only when its length lies within [min, max].
std::vector<SpanPair> spans_from_matrix(const MatchMatrix& m, std::size_t response_len, const MatchConfig& cfg);

/// Extracts review/response pairs from one review and the response that answers it.
/// Pair ids are "<response doc id>:p<k>" numbered in response order from 0.
/// Condition warnings (embedder disabled) are appended to `warnings` when given.
std::vector<corpus::ReviewResponsePair> extract_pairs(const corpus::DocumentGraph& review,
                                                      const corpus::DocumentGraph& response,
                                                      providers::Embedder* embedder, const MatchConfig& cfg,
                                                      std::vector<std::string>* warnings = nullptr);

struct PairExtraction {
    std::vector<corpus::ReviewResponsePair> pairs;
    std::vector<std::string> warnings;
};

/// Runs extract_pairs for every response in the corpus. A response is answered against its
/// `in_reply_to` review, else the review with the same reviewer id, else the only review of
/// its paper; unresolved responses are skipped with a warning.
PairExtraction extract_all_pairs(const corpus::Corpus& corpus, providers::Embedder* embedder,
                                 const MatchConfig& cfg);

}  // namespace respkit::align
