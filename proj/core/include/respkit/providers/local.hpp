#pragma once

#include <cstddef>
#include <cstdint>

#include "respkit/providers/provider.hpp"

namespace respkit::providers {

/// Offline deterministic embedder: signed feature hashing of word unigrams and bigrams,
/// L2-normalized. Texts sharing vocabulary get high cosine similarity.
class HashingEmbedder final : public Embedder {
public:
    explicit HashingEmbedder(std::size_t dim = 512) : dim_(dim == 0 ? 1 : dim) {}
    std::vector<Vector> embed(std::span<const std::string> texts) override;
    std::string name() const override { return "hashing-" + std::to_string(dim_); }

    Vector embed_one(std::string_view text) const;

private:
    std::size_t dim_;
};

/// Scores each passage by the fraction of distinct query tokens it contains.
class LexicalReranker final : public Reranker {
public:
    std::vector<double> score(std::string_view query, std::span<const std::string> passages) override;
};

/// Returns strictly decreasing scores, i.e. keeps the incoming order.
class IdentityReranker final : public Reranker {
public:
    std::vector<double> score(std::string_view query, std::span<const std::string> passages) override;
};

std::uint64_t fnv1a(std::string_view s);

}  // namespace respkit::providers
