#include "respkit/align/pair_align.hpp"

#include <regex>

#include "respkit/align/fuzzy.hpp"
#include "respkit/error.hpp"
#include "respkit/util/parallel.hpp"
#include "respkit/util/text.hpp"

namespace respkit::align {

using corpus::DocumentGraph;
using corpus::ReviewResponsePair;

void MatchConfig::validate() const {
    auto in_range = [](double t) { return t >= 0.0 && t <= 100.0; };
    if (!in_range(t0_embed)) throw ValidationError("t0_embed must lie in [0, 100]");
    if (!in_range(t1_fuzzy)) throw ValidationError("t1_fuzzy must lie in [0, 100]");
    if (min_segment_sentences > max_segment_sentences)
        throw ValidationError("min_segment_sentences exceeds max_segment_sentences");
}

namespace {

bool strip_prefix(std::string_view& s, std::string_view p) {
    if (s.substr(0, p.size()) != p) return false;
    s.remove_prefix(p.size());
    return true;
}

bool strip_suffix(std::string_view& s, std::string_view p) {
    if (s.size() < p.size() || s.substr(s.size() - p.size()) != p) return false;
    s.remove_suffix(p.size());
    return true;
}

}  // namespace

std::string normalize_for_match(std::string_view sentence) {
    static const std::regex marker(
        R"(^(?:(?:question|comment|weakness|q|w|c)\s*\d{0,3}\s*:|\d{1,3}[.)]\s|\(\d{1,3}\)|\[\d{1,3}\]))",
        std::regex::icase);
    std::string_view s = text::trim(sentence);
    bool changed = true;
    while (changed && !s.empty()) {
        changed = false;
        if (s.front() == '>') {
            s.remove_prefix(1);
            changed = true;
        }
        for (std::string_view q : {"\"", "\xE2\x80\x9C", "\xE2\x80\x9D"}) {
            if (strip_prefix(s, q)) changed = true;
        }
        std::match_results<std::string_view::const_iterator> m;
        if (std::regex_search(s.begin(), s.end(), m, marker)) {
            s.remove_prefix(static_cast<std::size_t>(m.length(0)));
            changed = true;
        }
        s = text::trim(s);
    }
    for (bool again = true; again;) {
        again = false;
        for (std::string_view q : {"\"", "\xE2\x80\x9C", "\xE2\x80\x9D"}) {
            if (strip_suffix(s, q)) again = true;
        }
        s = text::trim(s);
    }
    return text::ascii_lower(text::collapse_whitespace(s));
}

namespace {

MatchReason decide(const std::string& a, const std::string& b, const double* embed_sim, const MatchConfig& cfg) {
    if (a.empty() || b.empty()) return MatchReason::None;
    if (text::contains(a, b)) return MatchReason::Contains;
    if (text::contains(b, a)) return MatchReason::Contained;
    if (embed_sim && *embed_sim > cfg.t0_embed) return MatchReason::Embedding;
    if (partial_ratio(a, b) > cfg.t1_fuzzy) return MatchReason::Fuzzy;
    return MatchReason::None;
}

}  // namespace

MatchReason match_reason(std::string_view review_sentence, std::string_view response_sentence,
                         providers::Embedder* embedder, const MatchConfig& cfg) {
    auto a = normalize_for_match(review_sentence);
    auto b = normalize_for_match(response_sentence);
    if (a.empty() || b.empty()) return MatchReason::None;
    if (text::contains(a, b)) return MatchReason::Contains;
    if (text::contains(b, a)) return MatchReason::Contained;
    double sim = 0.0;
    if (embedder) sim = providers::semantic_similarity(*embedder, a, b);
    return decide(a, b, embedder ? &sim : nullptr, cfg);
}

bool sentences_match(std::string_view review_sentence, std::string_view response_sentence,
                     providers::Embedder* embedder, const MatchConfig& cfg) {
    return match_reason(review_sentence, response_sentence, embedder, cfg) != MatchReason::None;
}

MatchMatrix match_matrix(const std::vector<std::string>& review, const std::vector<std::string>& response,
                         providers::Embedder* embedder, const MatchConfig& cfg) {
    std::vector<std::string> rn, an;
    rn.reserve(review.size());
    an.reserve(response.size());
    for (const auto& s : review) rn.push_back(normalize_for_match(s));
    for (const auto& s : response) an.push_back(normalize_for_match(s));

    std::vector<providers::Vector> re, ae;
    if (embedder && !rn.empty() && !an.empty()) {
        re = embedder->embed(rn);
        ae = embedder->embed(an);
        if (re.size() != rn.size() || ae.size() != an.size())
            throw ProtocolError("embedder returned a different number of vectors");
    }

    MatchMatrix m(review.size(), std::vector<bool>(response.size(), false));
    std::vector<std::vector<char>> cols(response.size(), std::vector<char>(review.size(), 0));
    util::parallel_for(response.size(), std::max<std::size_t>(1, cfg.threads), [&](std::size_t j) {
        for (std::size_t i = 0; i < review.size(); ++i) {
            double sim = 0.0;
            if (embedder) sim = providers::similarity_0_100(re[i], ae[j]);
            cols[j][i] = decide(rn[i], an[j], embedder ? &sim : nullptr, cfg) != MatchReason::None;
        }
    });
    for (std::size_t j = 0; j < response.size(); ++j)
        for (std::size_t i = 0; i < review.size(); ++i) m[i][j] = cols[j][i] != 0;
    return m;
}

std::vector<SpanPair> spans_from_matrix(const MatchMatrix& m, std::size_t response_len, const MatchConfig& cfg) {
    std::vector<bool> matched(response_len, false);
    for (const auto& row : m)
        for (std::size_t j = 0; j < response_len && j < row.size(); ++j)
            if (row[j]) matched[j] = true;

    std::vector<std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t j = 0; j < response_len;) {
        if (!matched[j]) {
            ++j;
            continue;
        }
        std::size_t k = j;
        while (k < response_len && matched[k]) ++k;
        runs.emplace_back(j, k);
        j = k;
    }

    std::vector<SpanPair> out;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        auto [qb, qe] = runs[r];
        std::size_t seg_end = r + 1 < runs.size() ? runs[r + 1].first : response_len;
        std::size_t seg_len = seg_end - qe;
        if (seg_len < cfg.min_segment_sentences || seg_len > cfg.max_segment_sentences) continue;

        std::size_t best_b = 0, best_len = 0, cur_b = 0, cur_len = 0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            bool hit = false;
            for (std::size_t j = qb; j < qe && !hit; ++j) hit = m[i][j];
            if (hit) {
                if (cur_len == 0) cur_b = i;
                ++cur_len;
                if (cur_len > best_len) {
                    best_len = cur_len;
                    best_b = cur_b;
                }
            } else {
                cur_len = 0;
            }
        }
        out.push_back(SpanPair{best_b, best_b + best_len, qb, qe, qe, seg_end});
    }
    return out;
}

std::vector<ReviewResponsePair> extract_pairs(const DocumentGraph& review, const DocumentGraph& response,
                                              providers::Embedder* embedder, const MatchConfig& cfg,
                                              std::vector<std::string>* warnings) {
    cfg.validate();
    if (!embedder && warnings) {
        warnings->push_back("pair matching for " + response.doc_id +
                            ": embedding condition skipped (no embedder configured)");
    }
    auto rs = review.sentences();
    auto as = response.sentences();
    std::vector<std::string> rt, at;
    for (const auto* s : rs) rt.push_back(s->text);
    for (const auto* s : as) at.push_back(s->text);

    auto m = match_matrix(rt, at, embedder, cfg);
    std::vector<ReviewResponsePair> out;
    for (const auto& sp : spans_from_matrix(m, at.size(), cfg)) {
        ReviewResponsePair p;
        p.pair_id = response.doc_id + ":p" + std::to_string(out.size());
        p.paper_id = response.paper_id;
        p.review_doc_id = review.doc_id;
        p.response_doc_id = response.doc_id;
        p.reviewer_id = response.reviewer_id.empty() ? review.reviewer_id : response.reviewer_id;
        for (std::size_t i = sp.review_begin; i < sp.review_end; ++i) p.review_sentences.push_back(rs[i]->id);
        for (std::size_t j = sp.segment_begin; j < sp.segment_end; ++j) p.response_sentences.push_back(as[j]->id);
        out.push_back(std::move(p));
    }
    return out;
}

PairExtraction extract_all_pairs(const corpus::Corpus& corpus, providers::Embedder* embedder,
                                 const MatchConfig& cfg) {
    PairExtraction result;
    if (!embedder) result.warnings.push_back("pair matching: embedding condition skipped (no embedder configured)");
    for (const auto& paper : corpus.papers()) {
        auto reviews = corpus.documents_of(paper, corpus::DocKind::Review);
        for (const auto* resp : corpus.documents_of(paper, corpus::DocKind::Response)) {
            const DocumentGraph* review = nullptr;
            if (!resp->in_reply_to.empty()) {
                review = corpus.find_document(resp->in_reply_to);
            } else if (!resp->reviewer_id.empty()) {
                for (const auto* r : reviews)
                    if (r->reviewer_id == resp->reviewer_id) {
                        review = r;
                        break;
                    }
            }
            if (!review && resp->in_reply_to.empty() && reviews.size() == 1) review = reviews.front();
            if (!review) {
                result.warnings.push_back("response " + resp->doc_id + ": no matching review; skipped");
                continue;
            }
            auto pairs = extract_pairs(*review, *resp, embedder, cfg, nullptr);
            for (auto& p : pairs) result.pairs.push_back(std::move(p));
        }
    }
    return result;
}

}  // namespace respkit::align
