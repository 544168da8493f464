#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "respkit/corpus/taxonomy.hpp"

namespace respkit::eval {

struct LenControl {
    long long diff = 0;  ///< limit - generated words
    bool met = false;
};

struct PlanControl {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double order_fidelity = 0.0;
};

enum class Verdict { Supported, Unsupported, Contradicted };

std::string_view to_string(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view s);

/// Atomic facts and one verdict per fact.
struct FactVerdicts {
    std::vector<std::string> facts;
    std::vector<Verdict> verdicts;
};

/// Verdict fractions. With no facts all fractions are 0 and `empty` is set.
struct FactSummary {
    std::size_t n = 0;
    double supported = 0.0;
    double unsupported = 0.0;
    double contradicted = 0.0;
    bool empty = true;
};

FactSummary summarize(const FactVerdicts& v);

/// Word-weighted stance proportions in Stance enum order.
struct StanceProfile {
    std::array<double, kStanceCount> proportions{};
    double arg_load = 0.0;

    double of(Stance s) const { return proportions[static_cast<std::size_t>(s)]; }
};

enum class QualityDim { Targeting, Specificity, Convincingness };

inline constexpr std::array<QualityDim, 3> kQualityDims{QualityDim::Targeting, QualityDim::Specificity,
                                                         QualityDim::Convincingness};

/// Schema key: "targeting", "specificity", "convincingness".
std::string_view to_string(QualityDim d);

struct Justification {
    std::vector<std::string> strengths;
    std::vector<std::string> weaknesses;
};

struct QualityBlock {
    std::array<int, 3> raw{};           ///< 1..5 per dimension
    std::array<double, 3> normalized{};  ///< raw / 5
    std::array<Justification, 3> justifications;
    std::array<std::vector<std::string>, 3> suggestions;

    int score(QualityDim d) const { return raw[static_cast<std::size_t>(d)]; }
};

/// raw / 5.
double normalize_quality(int raw);

/// Metric bundle for one generated response. Absent blocks were not computed.
struct EvalReport {
    std::string pair_id;
    std::string setting;
    std::size_t words = 0;
    std::size_t placeholders = 0;
    std::optional<LenControl> len_control;
    std::optional<PlanControl> plan_control;
    std::optional<FactSummary> gfp;
    std::optional<FactSummary> icr;
    std::optional<StanceProfile> stance;
    std::optional<QualityBlock> quality;
    std::vector<std::string> warnings;
};

/// Checks every schema invariant of a report; returns one message per violation.
std::vector<std::string> validate_report(const EvalReport& r);

nlohmann::json to_json(const EvalReport& r);
/// Throws SchemaError when the object does not follow the report schema.
EvalReport report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const QualityBlock& q);
nlohmann::json to_json(const FactSummary& f);

}  // namespace respkit::eval
