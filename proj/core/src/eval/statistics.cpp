#include "respkit/eval/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "respkit/error.hpp"
#include "respkit/eval/quality.hpp"
#include "respkit/util/stats.hpp"

namespace respkit::eval {

namespace {

std::size_t common_width(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ValidationError("no samples");
    std::size_t k = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != k) throw ValidationError("every sample needs the same number of runs");
    return k;
}

}  // namespace

IccResult icc_2_1(const std::vector<std::vector<double>>& x) {
    std::size_t k = common_width(x);
    std::size_t n = x.size();
    if (n < 2 || k < 2) throw ValidationError("ICC needs at least two samples and two runs");
    double grand = 0.0;
    for (const auto& r : x)
        for (double v : r) grand += v;
    grand /= static_cast<double>(n * k);

    std::vector<double> row_mean(n, 0.0), col_mean(k, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            row_mean[i] += x[i][j] / static_cast<double>(k);
            col_mean[j] += x[i][j] / static_cast<double>(n);
        }
    double ss_total = 0.0, ss_rows = 0.0, ss_cols = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) ss_total += (x[i][j] - grand) * (x[i][j] - grand);
    for (double m : row_mean) ss_rows += static_cast<double>(k) * (m - grand) * (m - grand);
    for (double m : col_mean) ss_cols += static_cast<double>(n) * (m - grand) * (m - grand);
    if (ss_total == 0.0) return {1.0, true};

    const double dn = static_cast<double>(n), dk = static_cast<double>(k);
    double ss_err = ss_total - ss_rows - ss_cols;
    double msr = ss_rows / (dn - 1.0);
    double msc = ss_cols / (dk - 1.0);
    double mse = ss_err / ((dn - 1.0) * (dk - 1.0));
    double denom = msr + (dk - 1.0) * mse + dk * (msc - mse) / dn;
    if (denom == 0.0) return {0.0, true};
    return {(msr - mse) / denom, false};
}

ConsistencyStats consistency_stats(const std::vector<std::vector<double>>& runs) {
    std::size_t k = common_width(runs);
    if (k < 2) throw ValidationError("consistency needs at least two runs per sample");
    ConsistencyStats s;
    s.samples = runs.size();
    s.runs = k;
    for (const auto& r : runs) s.per_sample_std.push_back(stats::sample_stddev(r));
    s.mean_std = stats::mean(s.per_sample_std);
    s.median_std = stats::median(s.per_sample_std);
    s.p90_std = stats::percentile(s.per_sample_std, 90.0);
    s.max_std = *std::max_element(s.per_sample_std.begin(), s.per_sample_std.end());
    if (runs.size() >= 2) s.icc = icc_2_1(runs);
    return s;
}

double cliffs_delta(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw ValidationError("Cliff's delta needs two non-empty samples");
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sb.begin(), sb.end());
    long double dominance = 0;
    for (double x : a) {
        auto lo = std::lower_bound(sb.begin(), sb.end(), x) - sb.begin();  // b < x
        auto hi = sb.end() - std::upper_bound(sb.begin(), sb.end(), x);    // b > x
        dominance += static_cast<long double>(lo) - static_cast<long double>(hi);
    }
    return static_cast<double>(dominance / (static_cast<long double>(a.size()) * static_cast<long double>(b.size())));
}

PairedTTest paired_t_one_sided(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ValidationError("paired test needs equal-length samples");
    if (a.size() < 2) throw ValidationError("paired test needs at least two pairs");
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    PairedTTest r;
    r.df = d.size() - 1;
    r.mean_diff = stats::mean(d);
    double sd = stats::sample_stddev(d);
    if (sd == 0.0) {
        if (r.mean_diff == 0.0) {
            r.t = 0.0;
            r.p_one_sided = 0.5;
        } else {
            r.t = r.mean_diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
            r.p_one_sided = r.mean_diff > 0 ? 0.0 : 1.0;
        }
        return r;
    }
    r.t = r.mean_diff / (sd / std::sqrt(static_cast<double>(d.size())));
    boost::math::students_t dist(static_cast<double>(r.df));
    r.p_one_sided = boost::math::cdf(boost::math::complement(dist, r.t));
    return r;
}

std::vector<std::size_t> mismatch_partners(std::size_t n, std::uint64_t seed) {
    if (n < 2) throw ValidationError("mismatching needs at least two samples");
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, n - 2);
        std::size_t j = pick(rng);
        out[i] = j >= i ? j + 1 : j;
    }
    return out;
}

namespace {

ConditionScores judge_condition(const std::string& name, const std::vector<std::pair<std::string, std::string>>& pairs,
                                providers::ChatProvider& judge) {
    ConditionScores c;
    c.condition = name;
    for (const auto& [review, response] : pairs) {
        auto q = judge_quality(review, response, nullptr, judge);
        for (std::size_t d = 0; d < 3; ++d) c.scores[d].push_back(static_cast<double>(q.raw[d]));
    }
    for (std::size_t d = 0; d < 3; ++d) c.means[d] = stats::mean(c.scores[d]);
    return c;
}

ConditionComparison compare(const ConditionScores& base, const ConditionScores& other) {
    ConditionComparison cmp;
    cmp.baseline = base.condition;
    cmp.other = other.condition;
    for (std::size_t d = 0; d < 3; ++d) {
        cmp.t_tests[d] = paired_t_one_sided(base.scores[d], other.scores[d]);
        cmp.cliffs_delta[d] = cliffs_delta(base.scores[d], other.scores[d]);
    }
    return cmp;
}

}  // namespace

RobustnessReport robustness_harness(const std::vector<RobustnessSample>& samples, providers::ChatProvider& judge,
                                    std::uint64_t seed) {
    if (samples.size() < 2) throw ValidationError("robustness analysis needs at least two samples");
    RobustnessReport rep;
    rep.mismatch_partner = mismatch_partners(samples.size(), seed);

    std::vector<std::pair<std::string, std::string>> original, rewritten, mismatched;
    bool all_rewritten = true;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        original.emplace_back(samples[i].review, samples[i].response);
        if (samples[i].rewritten) rewritten.emplace_back(samples[i].review, *samples[i].rewritten);
        else all_rewritten = false;
        mismatched.emplace_back(samples[rep.mismatch_partner[i]].review, samples[i].response);
    }
    rep.conditions.push_back(judge_condition("original", original, judge));
    if (all_rewritten) rep.conditions.push_back(judge_condition("rewritten", rewritten, judge));
    rep.conditions.push_back(judge_condition("mismatched", mismatched, judge));
    for (std::size_t c = 1; c < rep.conditions.size(); ++c)
        rep.comparisons.push_back(compare(rep.conditions[0], rep.conditions[c]));
    return rep;
}

}  // namespace respkit::eval
