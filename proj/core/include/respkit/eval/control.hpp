#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "respkit/corpus/model.hpp"
#include "respkit/eval/report.hpp"

namespace respkit::eval {

/// diff = limit - generated; the limit is met when diff >= 0.
LenControl len_control(std::size_t generated_words, std::size_t limit);

struct LenBatch {
    double pct_met = 0.0;      ///< fraction of samples with diff >= 0
    double median_diff = 0.0;  ///< median of the signed differences
    std::size_t n = 0;
};

LenBatch len_batch(std::span<const long long> diffs);

struct LabelPrf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Multiset intersection precision/recall/F1 of generated against planned labels.
/// Empty generated gives P = 0; empty plan gives R = 0.
LabelPrf plan_labels_prf(std::span<const ResponseAction> plan, std::span<const ResponseAction> generated);

/// LCS length of two integer sequences.
std::size_t lcs_length(std::span<const int> a, std::span<const int> b);

/// m: per generated action, the matched plan index or -1.
/// Drops the -1 entries to get s, sorts s into s*, returns LCS(s, s*) / |s| (0 when s is empty).
double order_fidelity(std::span<const int> m);

struct PlanMatch {
    std::vector<int> m;
    std::vector<int> s;
    std::vector<int> s_star;
};

/// Each generated action takes the earliest not-yet-used plan position with the same label.
PlanMatch match_generated_to_plan(std::span<const ResponseAction> plan, std::span<const ResponseAction> generated);

/// Full planC block: label P/R/F1 plus OF of the greedy matching.
PlanControl plan_control(const corpus::ResponsePlan& plan, std::span<const ResponseAction> generated);

}  // namespace respkit::eval
