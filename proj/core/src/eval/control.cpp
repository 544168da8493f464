#include "respkit/eval/control.hpp"

#include <algorithm>
#include <map>

#include "respkit/util/stats.hpp"

namespace respkit::eval {

LenControl len_control(std::size_t generated_words, std::size_t limit) {
    long long diff = static_cast<long long>(limit) - static_cast<long long>(generated_words);
    return {diff, diff >= 0};
}

LenBatch len_batch(std::span<const long long> diffs) {
    LenBatch b;
    b.n = diffs.size();
    if (diffs.empty()) return b;
    std::vector<double> d(diffs.begin(), diffs.end());
    auto met = std::count_if(diffs.begin(), diffs.end(), [](long long x) { return x >= 0; });
    b.pct_met = static_cast<double>(met) / static_cast<double>(diffs.size());
    b.median_diff = stats::median(d);
    return b;
}

LabelPrf plan_labels_prf(std::span<const ResponseAction> plan, std::span<const ResponseAction> generated) {
    std::map<ResponseAction, std::size_t> pc, gc;
    for (auto a : plan) ++pc[a];
    for (auto a : generated) ++gc[a];
    std::size_t inter = 0;
    for (const auto& [a, n] : gc) {
        auto it = pc.find(a);
        if (it != pc.end()) inter += std::min(n, it->second);
    }
    LabelPrf r;
    if (!generated.empty()) r.precision = static_cast<double>(inter) / static_cast<double>(generated.size());
    if (!plan.empty()) r.recall = static_cast<double>(inter) / static_cast<double>(plan.size());
    if (r.precision + r.recall > 0.0) r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
    return r;
}

std::size_t lcs_length(std::span<const int> a, std::span<const int> b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double order_fidelity(std::span<const int> m) {
    std::vector<int> s;
    for (int x : m)
        if (x >= 0) s.push_back(x);
    if (s.empty()) return 0.0;
    std::vector<int> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    return static_cast<double>(lcs_length(s, sorted)) / static_cast<double>(s.size());
}

PlanMatch match_generated_to_plan(std::span<const ResponseAction> plan, std::span<const ResponseAction> generated) {
    PlanMatch pm;
    std::vector<bool> used(plan.size(), false);
    for (auto g : generated) {
        int hit = -1;
        for (std::size_t k = 0; k < plan.size(); ++k) {
            if (!used[k] && plan[k] == g) {
                used[k] = true;
                hit = static_cast<int>(k);
                break;
            }
        }
        pm.m.push_back(hit);
        if (hit >= 0) pm.s.push_back(hit);
    }
    pm.s_star = pm.s;
    std::sort(pm.s_star.begin(), pm.s_star.end());
    return pm;
}

PlanControl plan_control(const corpus::ResponsePlan& plan, std::span<const ResponseAction> generated) {
    auto flat = plan.flattened();
    auto prf = plan_labels_prf(flat, generated);
    auto pm = match_generated_to_plan(flat, generated);
    return {prf.precision, prf.recall, prf.f1, order_fidelity(pm.m)};
}

}  // namespace respkit::eval
