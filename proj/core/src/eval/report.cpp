#include "respkit/eval/report.hpp"

#include <cmath>

#include "respkit/error.hpp"

namespace respkit::eval {

using nlohmann::json;

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Supported: return "supported";
        case Verdict::Unsupported: return "unsupported";
        case Verdict::Contradicted: return "contradicted";
    }
    return "unsupported";
}

std::optional<Verdict> parse_verdict(std::string_view s) {
    for (auto v : {Verdict::Supported, Verdict::Unsupported, Verdict::Contradicted})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

FactSummary summarize(const FactVerdicts& v) {
    FactSummary s;
    s.n = v.verdicts.size();
    s.empty = s.n == 0;
    if (s.empty) return s;
    std::size_t sup = 0, uns = 0, con = 0;
    for (auto x : v.verdicts) {
        if (x == Verdict::Supported) ++sup;
        else if (x == Verdict::Unsupported) ++uns;
        else ++con;
    }
    auto n = static_cast<double>(s.n);
    s.supported = static_cast<double>(sup) / n;
    s.unsupported = static_cast<double>(uns) / n;
    s.contradicted = static_cast<double>(con) / n;
    return s;
}

std::string_view to_string(QualityDim d) {
    switch (d) {
        case QualityDim::Targeting: return "targeting";
        case QualityDim::Specificity: return "specificity";
        case QualityDim::Convincingness: return "convincingness";
    }
    return "targeting";
}

double normalize_quality(int raw) { return static_cast<double>(raw) / 5.0; }

namespace {

constexpr double kTol = 1e-9;

bool unit(double x) { return x >= -kTol && x <= 1.0 + kTol; }

void check_summary(const char* name, const FactSummary& f, std::vector<std::string>& out) {
    std::string n(name);
    if (!unit(f.supported) || !unit(f.unsupported) || !unit(f.contradicted))
        out.push_back(n + ": fraction outside [0,1]");
    double sum = f.supported + f.unsupported + f.contradicted;
    if (f.empty) {
        if (f.n != 0 || sum != 0.0) out.push_back(n + ": empty summary must have n = 0 and zero fractions");
    } else if (std::abs(sum - 1.0) > kTol) {
        out.push_back(n + ": fractions do not sum to 1");
    }
}

}  // namespace

std::vector<std::string> validate_report(const EvalReport& r) {
    std::vector<std::string> out;
    if (r.len_control && r.len_control->met != (r.len_control->diff >= 0))
        out.push_back("len_control: met must equal diff >= 0");
    if (const auto& p = r.plan_control) {
        if (!unit(p->precision) || !unit(p->recall) || !unit(p->f1) || !unit(p->order_fidelity))
            out.push_back("plan_control: value outside [0,1]");
        double pr = p->precision + p->recall;
        double f1 = pr > 0.0 ? 2.0 * p->precision * p->recall / pr : 0.0;
        if (std::abs(f1 - p->f1) > kTol) out.push_back("plan_control: F1 is not the harmonic mean of P and R");
    }
    if (r.gfp) check_summary("gfp", *r.gfp, out);
    if (r.icr) check_summary("icr", *r.icr, out);
    if (const auto& s = r.stance) {
        double sum = 0.0;
        for (double x : s->proportions) {
            if (!unit(x)) out.push_back("stance: proportion outside [0,1]");
            sum += x;
        }
        if (std::abs(sum - 1.0) > kTol) out.push_back("stance: proportions do not sum to 1");
        double arg = s->of(Stance::Cooperative) + s->of(Stance::Defensive) + s->of(Stance::Hedge);
        if (std::abs(arg - s->arg_load) > kTol) out.push_back("stance: arg_load differs from Coop + Defe + Hed");
    }
    if (const auto& q = r.quality) {
        for (std::size_t i = 0; i < 3; ++i) {
            if (q->raw[i] < 1 || q->raw[i] > 5) out.push_back("quality: score outside 1..5");
            if (std::abs(q->normalized[i] - normalize_quality(q->raw[i])) > kTol)
                out.push_back("quality: normalized score differs from raw / 5");
        }
    }
    return out;
}

json to_json(const FactSummary& f) {
    return {{"n", f.n},
            {"supported", f.supported},
            {"unsupported", f.unsupported},
            {"contradicted", f.contradicted},
            {"empty", f.empty}};
}

json to_json(const QualityBlock& q) {
    json scores, norm, just, sugg;
    for (auto d : kQualityDims) {
        auto i = static_cast<std::size_t>(d);
        std::string key(to_string(d));
        scores[key] = q.raw[i];
        norm[key] = q.normalized[i];
        just[key] = {{"strengths", q.justifications[i].strengths}, {"weaknesses", q.justifications[i].weaknesses}};
        sugg[key] = q.suggestions[i];
    }
    return {{"scores", scores}, {"normalized", norm}, {"justifications", just}, {"suggestions", sugg}};
}

json to_json(const EvalReport& r) {
    json j{{"pair_id", r.pair_id},
           {"setting", r.setting},
           {"words", r.words},
           {"placeholders", r.placeholders},
           {"warnings", r.warnings}};
    if (r.len_control) j["len_control"] = {{"diff", r.len_control->diff}, {"met", r.len_control->met}};
    if (const auto& p = r.plan_control)
        j["plan_control"] = {{"P", p->precision}, {"R", p->recall}, {"F1", p->f1}, {"OF", p->order_fidelity}};
    if (r.gfp) j["gfp"] = to_json(*r.gfp);
    if (r.icr) j["icr"] = to_json(*r.icr);
    if (const auto& s = r.stance) {
        json st;
        for (std::size_t i = 0; i < kStanceCount; ++i)
            st[std::string(to_string(static_cast<Stance>(i)))] = s->proportions[i];
        st["arg_load"] = s->arg_load;
        j["stance"] = st;
    }
    if (r.quality) j["quality"] = to_json(*r.quality);
    return j;
}

namespace {

FactSummary summary_from_json(const json& j) {
    FactSummary f;
    f.n = j.at("n").get<std::size_t>();
    f.supported = j.at("supported").get<double>();
    f.unsupported = j.at("unsupported").get<double>();
    f.contradicted = j.at("contradicted").get<double>();
    f.empty = j.at("empty").get<bool>();
    return f;
}

}  // namespace

EvalReport report_from_json(const json& j) {
    try {
        EvalReport r;
        r.pair_id = j.value("pair_id", std::string{});
        r.setting = j.value("setting", std::string{});
        r.words = j.value("words", std::size_t{0});
        r.placeholders = j.value("placeholders", std::size_t{0});
        r.warnings = j.value("warnings", std::vector<std::string>{});
        if (j.contains("len_control"))
            r.len_control = LenControl{j["len_control"].at("diff").get<long long>(), j["len_control"].at("met").get<bool>()};
        if (j.contains("plan_control")) {
            const auto& p = j["plan_control"];
            r.plan_control = PlanControl{p.at("P").get<double>(), p.at("R").get<double>(), p.at("F1").get<double>(),
                                         p.at("OF").get<double>()};
        }
        if (j.contains("gfp")) r.gfp = summary_from_json(j["gfp"]);
        if (j.contains("icr")) r.icr = summary_from_json(j["icr"]);
        if (j.contains("stance")) {
            StanceProfile s;
            for (std::size_t i = 0; i < kStanceCount; ++i)
                s.proportions[i] = j["stance"].at(std::string(to_string(static_cast<Stance>(i)))).get<double>();
            s.arg_load = j["stance"].at("arg_load").get<double>();
            r.stance = s;
        }
        if (j.contains("quality")) {
            const auto& q = j["quality"];
            QualityBlock b;
            for (auto d : kQualityDims) {
                auto i = static_cast<std::size_t>(d);
                std::string key(to_string(d));
                b.raw[i] = q.at("scores").at(key).get<int>();
                b.normalized[i] = q.contains("normalized") ? q["normalized"].at(key).get<double>()
                                                           : normalize_quality(b.raw[i]);
                const auto& jj = q.at("justifications").at(key);
                b.justifications[i].strengths = jj.value("strengths", std::vector<std::string>{});
                b.justifications[i].weaknesses = jj.value("weaknesses", std::vector<std::string>{});
                b.suggestions[i] = q.at("suggestions").value(key, std::vector<std::string>{});
            }
            r.quality = b;
        }
        return r;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed evaluation report: ") + e.what(), j.dump());
    }
}

}  // namespace respkit::eval
