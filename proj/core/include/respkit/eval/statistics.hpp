#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "respkit/eval/report.hpp"
#include "respkit/providers/provider.hpp"

namespace respkit::eval {

struct IccResult {
    double value = 0.0;
    /// Set when every score is identical; the value is then reported as 1.
    bool degenerate = false;
};

/// ICC(2,1): two-way random effects, absolute agreement, single measurement.
/// rows = samples, columns = runs. Needs at least two samples and two runs of equal length.
IccResult icc_2_1(const std::vector<std::vector<double>>& scores);

struct ConsistencyStats {
    std::size_t samples = 0;
    std::size_t runs = 0;
    double mean_std = 0.0;
    double median_std = 0.0;
    double p90_std = 0.0;
    double max_std = 0.0;
    std::vector<double> per_sample_std;
    /// Absent for a single sample.
    std::optional<IccResult> icc;
};

/// Per-sample sample standard deviation across runs, aggregated, plus ICC(2,1).
/// Throws ValidationError for fewer than two runs or unequal run counts.
ConsistencyStats consistency_stats(const std::vector<std::vector<double>>& score_runs);

/// Cliff's delta: (#{a > b} - #{a < b}) / (|a| |b|) over all cross pairs, in O(n log n).
double cliffs_delta(std::span<const double> a, std::span<const double> b);

struct PairedTTest {
    double t = 0.0;
    double p_one_sided = 1.0;  ///< H1: mean(a - b) > 0
    std::size_t df = 0;
    double mean_diff = 0.0;
};

/// Paired t-test of a against b. Throws ValidationError for unequal lengths or n < 2.
PairedTTest paired_t_one_sided(std::span<const double> a, std::span<const double> b);

struct RobustnessSample {
    std::string review;
    std::string response;
    /// A meaning-preserving rewrite of the response; the rewritten condition needs it for every sample.
    std::optional<std::string> rewritten;
};

struct ConditionScores {
    std::string condition;
    std::array<std::vector<double>, 3> scores;  ///< per quality dimension, per sample
    std::array<double, 3> means{};
};

struct ConditionComparison {
    std::string baseline;
    std::string other;
    std::array<PairedTTest, 3> t_tests;  ///< baseline > other
    std::array<double, 3> cliffs_delta{};
};

struct RobustnessReport {
    std::vector<ConditionScores> conditions;
    std::vector<ConditionComparison> comparisons;
    std::vector<std::size_t> mismatch_partner;  ///< review index used for sample i when mismatched
};

/// Seeded mismatch: each sample gets another sample's review (never its own).
std::vector<std::size_t> mismatch_partners(std::size_t n, std::uint64_t seed);

/// Judges original, rewritten (when every sample has a rewrite) and mismatched pairings and
/// compares original against each. Throws ValidationError for fewer than two samples.
RobustnessReport robustness_harness(const std::vector<RobustnessSample>& samples, providers::ChatProvider& judge,
                                    std::uint64_t seed = 13);

}  // namespace respkit::eval
