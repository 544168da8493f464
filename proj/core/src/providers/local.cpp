#include "respkit/providers/local.hpp"

#include <cmath>
#include <set>

#include "respkit/util/text.hpp"

namespace respkit::providers {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

Vector HashingEmbedder::embed_one(std::string_view text) const {
    Vector v(dim_, 0.0f);
    auto tokens = text::word_tokens(text);
    auto add = [&](const std::string& feature, float weight) {
        auto h = fnv1a(feature);
        float sign = (h >> 63) ? -1.0f : 1.0f;
        v[h % dim_] += sign * weight;
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        add(tokens[i], 1.0f);
        if (i + 1 < tokens.size()) add(tokens[i] + ' ' + tokens[i + 1], 0.5f);
    }
    double norm = 0.0;
    for (float x : v) norm += static_cast<double>(x) * x;
    if (norm > 0.0) {
        auto inv = static_cast<float>(1.0 / std::sqrt(norm));
        for (float& x : v) x *= inv;
    }
    return v;
}

std::vector<Vector> HashingEmbedder::embed(std::span<const std::string> texts) {
    std::vector<Vector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed_one(t));
    return out;
}

std::vector<double> LexicalReranker::score(std::string_view query, std::span<const std::string> passages) {
    auto qt = text::word_tokens(query);
    std::set<std::string> q(qt.begin(), qt.end());
    std::vector<double> out;
    out.reserve(passages.size());
    for (const auto& p : passages) {
        if (q.empty()) {
            out.push_back(0.0);
            continue;
        }
        auto pt = text::word_tokens(p);
        std::set<std::string> ps(pt.begin(), pt.end());
        std::size_t hit = 0;
        for (const auto& t : q) hit += ps.count(t);
        out.push_back(static_cast<double>(hit) / static_cast<double>(q.size()));
    }
    return out;
}

std::vector<double> IdentityReranker::score(std::string_view, std::span<const std::string> passages) {
    std::vector<double> out(passages.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>(out.size() - i);
    return out;
}

}  // namespace respkit::providers
