#pragma once

#include <optional>
#include <string>
#include <vector>

#include "respkit/eval/discourse.hpp"
#include "respkit/eval/factuality.hpp"
#include "respkit/eval/report.hpp"
#include "respkit/gen/engine.hpp"
#include "respkit/providers/provider.hpp"

namespace respkit::eval {

/// Judge roles. One provider may fill several roles.
struct Judges {
    providers::ChatProvider* judge = nullptr;      ///< annotation and quality
    providers::ChatProvider* extractor = nullptr;  ///< atomic fact extraction
    providers::ChatProvider* verifier = nullptr;   ///< fact verification
};

struct EvalOptions {
    bool discourse = true;
    bool quality = true;
    bool factuality = true;
};

struct Evaluation {
    EvalReport report;
    std::optional<Annotation> annotation;
};

/// Full metric bundle for one generation.
///   lenC when the setting renders a limit; planC when it renders a plan (needs annotation);
///   stance from the annotated spans; quality from the judge with the alignment;
///   GFP against the request's inputs; ICR when there are edit strings.
/// A SchemaError from one judge leaves that block absent and adds a warning.
/// ProviderError propagates.
Evaluation evaluate(const gen::GenerationRequest& req, const gen::GenerationResult& res, const Judges& judges,
                    const EvalOptions& opts = {});

/// The grounding context of a request: edit strings, their paragraphs (S3 and later) and v1 paragraphs.
GroundingInputs grounding_inputs(const gen::GenerationRequest& req);

/// One aggregate row per setting.
struct SettingRow {
    std::string setting;
    std::size_t n = 0;
    std::optional<double> gfp_sup, gfp_unsup, gfp_con;
    std::optional<double> icr_sup, icr_unsup, icr_con;
    double words = 0.0;
    std::optional<double> met;    ///< fraction of reports meeting the limit
    std::optional<double> mdiff;  ///< median limit - words
    std::optional<double> precision, recall, f1, order_fidelity;
    std::optional<double> targeting, specificity, convincingness;  ///< mean normalized
    double placeholder_rate = 0.0;
};

/// Means per setting over the reports that carry each block. Rows sorted by setting name.
std::vector<SettingRow> aggregate(const std::vector<EvalReport>& reports);

/// Header: setting,n,gfp_sup,gfp_unsup,gfp_con,icr_sup,icr_unsup,icr_con,words,met,mdiff,P,R,F1,OF,targ,spec,conv,ph
/// Absent values are empty cells.
std::string to_csv(const std::vector<SettingRow>& rows);

}  // namespace respkit::eval
