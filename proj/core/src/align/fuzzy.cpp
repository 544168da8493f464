#include "respkit/align/fuzzy.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "respkit/util/text.hpp"

namespace respkit::align {

namespace {

/// Match masks of a fixed pattern, one bit per pattern position.
class PatternMasks {
public:
    explicit PatternMasks(std::u32string_view pattern)
        : len_(pattern.size()), words_((pattern.size() + 63) / 64), ascii_(256 * words_, 0) {
        for (std::size_t i = 0; i < pattern.size(); ++i) {
            std::uint64_t* row = mutable_row(pattern[i]);
            row[i / 64] |= std::uint64_t{1} << (i % 64);
        }
    }

    const std::uint64_t* row(char32_t c) const {
        if (c < 256) return &ascii_[c * words_];
        auto it = other_.find(c);
        return it == other_.end() ? nullptr : it->second.data();
    }

    std::size_t size() const { return len_; }
    std::size_t words() const { return words_; }

private:
    std::uint64_t* mutable_row(char32_t c) {
        if (c < 256) return &ascii_[c * words_];
        auto& v = other_[c];
        if (v.empty()) v.assign(words_, 0);
        return v.data();
    }

    std::size_t len_;
    std::size_t words_;
    std::vector<std::uint64_t> ascii_;
    std::unordered_map<char32_t, std::vector<std::uint64_t>> other_;
};

std::size_t lcs_with(const PatternMasks& pm, std::u32string_view text, std::vector<std::uint64_t>& v) {
    const std::size_t w = pm.words();
    if (pm.size() == 0 || text.empty()) return 0;
    v.assign(w, ~std::uint64_t{0});
    for (char32_t c : text) {
        const std::uint64_t* m = pm.row(c);
        if (!m) continue;
        std::uint64_t carry = 0;
        for (std::size_t k = 0; k < w; ++k) {
            std::uint64_t u = v[k] & m[k];
            std::uint64_t sum = v[k] + u;
            std::uint64_t c1 = sum < v[k] ? 1 : 0;
            std::uint64_t sum2 = sum + carry;
            std::uint64_t c2 = sum2 < sum ? 1 : 0;
            v[k] = sum2 | (v[k] & ~u);
            carry = c1 | c2;
        }
    }
    std::size_t ones = 0;
    std::size_t full = pm.size() / 64;
    for (std::size_t k = 0; k < full; ++k) ones += static_cast<std::size_t>(std::popcount(v[k]));
    if (std::size_t rem = pm.size() % 64; rem) {
        ones += static_cast<std::size_t>(std::popcount(v[full] & ((std::uint64_t{1} << rem) - 1)));
    }
    return pm.size() - ones;
}

double ratio_from_lcs(std::size_t lcs, std::size_t total) {
    return total == 0 ? 0.0 : 100.0 * 2.0 * static_cast<double>(lcs) / static_cast<double>(total);
}

}  // namespace

std::size_t lcs_length(std::u32string_view a, std::u32string_view b) {
    if (a.size() > b.size()) std::swap(a, b);
    PatternMasks pm(a);
    std::vector<std::uint64_t> v;
    return lcs_with(pm, b, v);
}

double ratio(std::u32string_view a, std::u32string_view b) {
    return ratio_from_lcs(lcs_length(a, b), a.size() + b.size());
}

double ratio(std::string_view a, std::string_view b) { return ratio(text::to_u32(a), text::to_u32(b)); }

double partial_ratio(std::u32string_view a, std::u32string_view b) {
    if (a.empty() || b.empty()) return 0.0;
    std::u32string_view shorter = a.size() <= b.size() ? a : b;
    std::u32string_view longer = a.size() <= b.size() ? b : a;
    if (longer.find(shorter) != std::u32string_view::npos) return 100.0;

    PatternMasks pm(shorter);
    std::vector<std::uint64_t> v;
    const std::size_t n = shorter.size();
    std::size_t best = 0;
    for (std::size_t start = 0; start + n <= longer.size(); ++start) {
        best = std::max(best, lcs_with(pm, longer.substr(start, n), v));
        if (best == n) break;
    }
    return ratio_from_lcs(best, 2 * n);
}

double partial_ratio(std::string_view a, std::string_view b) {
    return partial_ratio(text::to_u32(a), text::to_u32(b));
}

}  // namespace respkit::align
