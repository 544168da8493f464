#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "respkit/corpus/model.hpp"
#include "respkit/providers/provider.hpp"

namespace respkit::retrieval {

struct RetrievalConfig {
    std::size_t k_final = 5;
    double rrf_k = 60.0;
    double bm25_k1 = 1.2;
    double bm25_b = 0.75;
    std::size_t candidate_pool = 50;

    void validate() const;
};

/// A document position and its score.
struct Scored {
    std::size_t index = 0;
    double score = 0.0;
};

/// Okapi BM25 over lowercase word tokens with idf = ln(1 + (N - n + 0.5) / (n + 0.5)).
class Bm25Index {
public:
    Bm25Index(const std::vector<std::string>& documents, double k1 = 1.2, double b = 0.75);

    /// Score of every document, descending; ties keep document order.
    std::vector<Scored> rank(std::string_view query) const;
    double score(std::string_view query, std::size_t doc) const;
    std::size_t size() const { return lengths_.size(); }

private:
    double k1_, b_, avgdl_ = 0.0;
    std::vector<std::size_t> lengths_;
    std::vector<std::vector<std::pair<std::string, std::size_t>>> tf_;  ///< sorted term counts per doc
    std::vector<std::pair<std::string, std::size_t>> df_;               ///< sorted document frequencies
};

std::vector<Scored> bm25_rank(std::string_view query, const std::vector<std::string>& documents,
                              const RetrievalConfig& cfg = {});

/// Reciprocal rank fusion: score(d) = sum over rankings containing d of 1 / (rrf_k + rank),
/// rank starting at 1. Descending; ties by document index.
std::vector<Scored> rrf_fuse(const std::vector<std::vector<std::size_t>>& rankings, double rrf_k = 60.0);

/// Cosine ranking of the documents against the query, descending; ties by document index.
std::vector<Scored> dense_rank(std::string_view query, const std::vector<std::string>& documents,
                               providers::Embedder& embedder);

struct V1Paragraph {
    std::size_t section = 0;
    std::size_t paragraph = 0;   ///< index within the section
    std::string section_title;
    std::string text;
    /// The retrieval unit: section title, newline, paragraph text.
    std::string passage() const;
};

/// Paragraphs of a document in reading order.
std::vector<V1Paragraph> paragraphs_of(const corpus::DocumentGraph& doc);

struct Retrieved {
    V1Paragraph paragraph;
    std::size_t index = 0;  ///< position in paragraphs_of(v1)
    double score = 0.0;     ///< reranker score, or fused score without a reranker
};

struct RetrievalResult {
    std::vector<Retrieved> results;
    bool degraded = false;
    std::vector<std::string> warnings;
};

/// BM25 and dense rankings fused by RRF; the top candidate_pool are rescored by the
/// reranker and the best k_final returned. Without an embedder only BM25 is fused; without
/// a reranker the fused order is final. Provider failures fall back to the remaining
/// signals and set `degraded`. Throws ValidationError when v1 has no paragraph.
RetrievalResult retrieve_v1(std::string_view review_segment, const corpus::DocumentGraph& v1,
                            providers::Embedder* embedder, providers::Reranker* reranker,
                            const RetrievalConfig& cfg = {});

}  // namespace respkit::retrieval
