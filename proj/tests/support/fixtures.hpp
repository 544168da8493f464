#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "respkit/corpus/model.hpp"
#include "respkit/gen/prompt.hpp"
#include "respkit/providers/provider.hpp"

namespace fixtures {

std::filesystem::path golden_dir();

/// The request every golden prompt is rendered from, with its setting swapped in.
respkit::gen::GenerationRequest canonical_request(respkit::gen::Setting s);

/// Embeds each text as a unit 2-vector at angle 7 * (hash mod 26) degrees, so pairwise
/// similarities are 100 * cos(7k degrees) and never land near the triplet threshold of 20.
class StubEmbedder final : public respkit::providers::Embedder {
public:
    std::vector<respkit::providers::Vector> embed(std::span<const std::string> texts) override;
    std::string name() const override { return "stub"; }

    static int bucket(const std::string& text);
    static double similarity(const std::string& a, const std::string& b);
};

/// Single-section, single-paragraph document with ids "<doc_id>.s<i>".
respkit::corpus::DocumentGraph make_doc(const std::string& doc_id, const std::string& paper_id,
                                        respkit::corpus::DocKind kind, const std::vector<std::string>& sentences);

struct ExpectedPair {
    std::size_t review_begin, review_end, segment_begin, segment_end;
};

struct PairCase {
    std::string name;
    std::vector<std::string> review;
    std::vector<std::string> response;
    std::vector<ExpectedPair> expected;
};

/// Twelve hand-built review/response documents with the pairs they must yield.
const std::vector<PairCase>& pair_cases();

struct TripletCase {
    respkit::corpus::Corpus corpus;
    std::vector<respkit::corpus::ReviewResponsePair> pairs;
};

/// A random single-paper corpus with at most `max_edits` edits whose review and response
/// sentences are drawn partly from the edited sentences.
TripletCase random_triplet_case(std::mt19937_64& rng, std::size_t max_edits = 20);

struct OracleLink {
    std::string pair_id;
    std::string edit_id;
    bool ce = false;  ///< some review sentence passes the rule
    bool ae = false;  ///< some response sentence passes the rule
    bool operator==(const OracleLink&) const = default;
};

/// Brute-force conjunctive rule over every (pair, sentence, edit) of the case, scored with the
/// window partial_ratio oracle, the bigram oracle and StubEmbedder::similarity. Links come out
/// in pair order, then edit ordinal; only edits with at least one positive are listed.
std::vector<OracleLink> triplet_oracle(const TripletCase& tc, double fuzzy_min, double embed_min, double bigram_min);

/// The similarity provenance of aligned triplets in the same shape as triplet_oracle.
std::vector<OracleLink> links_of(const std::vector<respkit::corpus::Re3Triplet>& triplets);

/// Five papers, each with v1/v2 text, one quoted review/response exchange and matching edits.
respkit::corpus::Corpus pipeline_corpus();

/// Writes the corpus as JSONL into `dir/corpus.jsonl`.
void write_corpus(const respkit::corpus::Corpus& c, const std::filesystem::path& dir);

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& tag);

}  // namespace fixtures
