#include "respkit/providers/provider.hpp"

#include <algorithm>
#include <cmath>

#include "respkit/error.hpp"

namespace respkit::providers {

double cosine(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw ProtocolError("embedding dimension mismatch");
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double similarity_0_100(const Vector& a, const Vector& b) { return 100.0 * std::max(0.0, cosine(a, b)); }

double semantic_similarity(Embedder& embedder, const std::string& a, const std::string& b) {
    std::vector<std::string> texts{a, b};
    auto vecs = embedder.embed(texts);
    if (vecs.size() != 2) throw ProtocolError("embedder returned " + std::to_string(vecs.size()) + " vectors for 2 texts");
    return similarity_0_100(vecs[0], vecs[1]);
}

}  // namespace respkit::providers
