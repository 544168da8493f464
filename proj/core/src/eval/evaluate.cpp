#include "respkit/eval/evaluate.hpp"

#include <cstdio>
#include <map>

#include "respkit/error.hpp"
#include "respkit/eval/control.hpp"
#include "respkit/eval/factuality.hpp"
#include "respkit/eval/quality.hpp"
#include "respkit/util/stats.hpp"

namespace respkit::eval {

GroundingInputs grounding_inputs(const gen::GenerationRequest& req) {
    GroundingInputs in;
    for (const auto& e : req.author_edits) {
        in.edit_strings.push_back(e.text);
        if (gen::needs_context(req.setting) && e.paragraph) in.paragraph_contexts.push_back(*e.paragraph);
    }
    if (req.v1_paragraphs) in.v1_paragraphs = *req.v1_paragraphs;
    return in;
}

Evaluation evaluate(const gen::GenerationRequest& req, const gen::GenerationResult& res, const Judges& judges,
                    const EvalOptions& opts) {
    Evaluation out;
    EvalReport& r = out.report;
    r.pair_id = res.pair_id;
    r.setting = gen::to_string(res.setting);
    r.words = res.word_count;
    r.placeholders = res.placeholders.size();

    const bool limited = gen::needs_limit(res.setting) && req.length_limit;
    const bool planned = gen::needs_plan(res.setting) && req.plan;
    if (limited) r.len_control = len_control(res.word_count, *req.length_limit);

    auto guarded = [&](const char* what, auto&& fn) {
        try {
            fn();
        } catch (const SchemaError& e) {
            r.warnings.push_back(std::string(what) + ": " + e.what());
        }
    };

    bool want_annotation = opts.discourse || planned || (opts.quality && gen::needs_plan(res.setting));
    if (want_annotation && judges.judge) {
        guarded("annotation", [&] { out.annotation = annotate_response(req.review_segment, res.response_text, *judges.judge); });
    }
    if (out.annotation) {
        if (planned) r.plan_control = plan_control(*req.plan, out.annotation->actions());
        if (opts.discourse) {
            try {
                r.stance = stance_profile(out.annotation->spans);
            } catch (const ValidationError& e) {
                r.warnings.push_back(std::string("stance: ") + e.what());
            }
        }
    } else if (planned) {
        r.warnings.push_back("plan_control: no annotation available");
    }

    if (opts.quality && judges.judge) {
        guarded("quality", [&] {
            r.quality = judge_quality(req.review_segment, res.response_text,
                                      out.annotation ? &*out.annotation : nullptr, *judges.judge);
        });
    }

    if (opts.factuality && judges.extractor && judges.verifier) {
        auto inputs = grounding_inputs(req);
        guarded("gfp", [&] { r.gfp = summarize(gfp(res.response_text, inputs, *judges.extractor, *judges.verifier)); });
        if (!inputs.edit_strings.empty()) {
            guarded("icr", [&] {
                r.icr = summarize(icr(inputs.edit_strings, res.response_text, *judges.extractor, *judges.verifier));
            });
        }
    }
    return out;
}

namespace {

struct Acc {
    std::vector<double> v;
    void add(double x) { v.push_back(x); }
    std::optional<double> mean() const {
        if (v.empty()) return std::nullopt;
        return stats::mean(v);
    }
};

std::string cell(const std::optional<double>& v) {
    if (!v) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    return buf;
}

}  // namespace

std::vector<SettingRow> aggregate(const std::vector<EvalReport>& reports) {
    struct Group {
        std::size_t n = 0;
        Acc gs, gu, gc, is, iu, ic, words, met, diff, p, rc, f, of, t, s, c, ph;
    };
    std::map<std::string, Group> groups;
    for (const auto& r : reports) {
        auto& g = groups[r.setting];
        ++g.n;
        g.words.add(static_cast<double>(r.words));
        g.ph.add(r.placeholders > 0 ? 1.0 : 0.0);
        if (r.gfp) {
            g.gs.add(r.gfp->supported);
            g.gu.add(r.gfp->unsupported);
            g.gc.add(r.gfp->contradicted);
        }
        if (r.icr) {
            g.is.add(r.icr->supported);
            g.iu.add(r.icr->unsupported);
            g.ic.add(r.icr->contradicted);
        }
        if (r.len_control) {
            g.met.add(r.len_control->met ? 1.0 : 0.0);
            g.diff.add(static_cast<double>(r.len_control->diff));
        }
        if (r.plan_control) {
            g.p.add(r.plan_control->precision);
            g.rc.add(r.plan_control->recall);
            g.f.add(r.plan_control->f1);
            g.of.add(r.plan_control->order_fidelity);
        }
        if (r.quality) {
            g.t.add(r.quality->normalized[0]);
            g.s.add(r.quality->normalized[1]);
            g.c.add(r.quality->normalized[2]);
        }
    }
    std::vector<SettingRow> rows;
    for (const auto& [setting, g] : groups) {
        SettingRow row;
        row.setting = setting;
        row.n = g.n;
        row.gfp_sup = g.gs.mean();
        row.gfp_unsup = g.gu.mean();
        row.gfp_con = g.gc.mean();
        row.icr_sup = g.is.mean();
        row.icr_unsup = g.iu.mean();
        row.icr_con = g.ic.mean();
        row.words = *g.words.mean();
        row.met = g.met.mean();
        if (!g.diff.v.empty()) row.mdiff = stats::median(g.diff.v);
        row.precision = g.p.mean();
        row.recall = g.rc.mean();
        row.f1 = g.f.mean();
        row.order_fidelity = g.of.mean();
        row.targeting = g.t.mean();
        row.specificity = g.s.mean();
        row.convincingness = g.c.mean();
        row.placeholder_rate = *g.ph.mean();
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string to_csv(const std::vector<SettingRow>& rows) {
    std::string out = "setting,n,gfp_sup,gfp_unsup,gfp_con,icr_sup,icr_unsup,icr_con,words,met,mdiff,P,R,F1,OF,targ,spec,conv,ph\n";
    for (const auto& r : rows) {
        std::vector<std::string> cells{r.setting,
                                       std::to_string(r.n),
                                       cell(r.gfp_sup),
                                       cell(r.gfp_unsup),
                                       cell(r.gfp_con),
                                       cell(r.icr_sup),
                                       cell(r.icr_unsup),
                                       cell(r.icr_con),
                                       cell(r.words),
                                       cell(r.met),
                                       cell(r.mdiff),
                                       cell(r.precision),
                                       cell(r.recall),
                                       cell(r.f1),
                                       cell(r.order_fidelity),
                                       cell(r.targeting),
                                       cell(r.specificity),
                                       cell(r.convincingness),
                                       cell(r.placeholder_rate)};
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    }
    return out;
}

}  // namespace respkit::eval
