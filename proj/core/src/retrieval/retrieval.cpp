#include "respkit/retrieval/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "respkit/error.hpp"
#include "respkit/util/text.hpp"

namespace respkit::retrieval {

void RetrievalConfig::validate() const {
    if (k_final == 0 || candidate_pool == 0) throw ValidationError("k_final and candidate_pool must be positive");
    if (k_final > candidate_pool) throw ValidationError("k_final must not exceed candidate_pool");
    if (!(rrf_k > 0.0) || !(bm25_k1 >= 0.0)) throw ValidationError("rrf_k must be positive and bm25_k1 non-negative");
    if (!(bm25_b >= 0.0 && bm25_b <= 1.0)) throw ValidationError("bm25_b must lie in [0, 1]");
}

namespace {

void sort_scored(std::vector<Scored>& v) {
    std::stable_sort(v.begin(), v.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.index < b.index;
    });
}

std::size_t lookup(const std::vector<std::pair<std::string, std::size_t>>& sorted, const std::string& key) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), key,
                               [](const auto& e, const std::string& k) { return e.first < k; });
    return it != sorted.end() && it->first == key ? it->second : 0;
}

}  // namespace

Bm25Index::Bm25Index(const std::vector<std::string>& documents, double k1, double b) : k1_(k1), b_(b) {
    std::map<std::string, std::size_t> df;
    std::size_t total = 0;
    for (const auto& d : documents) {
        std::map<std::string, std::size_t> tf;
        auto toks = text::word_tokens(d);
        for (auto& t : toks) ++tf[t];
        for (const auto& [t, _] : tf) ++df[t];
        lengths_.push_back(toks.size());
        total += toks.size();
        tf_.emplace_back(tf.begin(), tf.end());
    }
    df_.assign(df.begin(), df.end());
    if (!documents.empty()) avgdl_ = static_cast<double>(total) / static_cast<double>(documents.size());
}

double Bm25Index::score(std::string_view query, std::size_t doc) const {
    if (avgdl_ <= 0.0) return 0.0;
    const double n_docs = static_cast<double>(lengths_.size());
    double s = 0.0;
    for (const auto& q : text::word_tokens(query)) {
        auto tf = static_cast<double>(lookup(tf_[doc], q));
        if (tf == 0.0) continue;
        auto n = static_cast<double>(lookup(df_, q));
        double idf = std::log(1.0 + (n_docs - n + 0.5) / (n + 0.5));
        double norm = k1_ * (1.0 - b_ + b_ * static_cast<double>(lengths_[doc]) / avgdl_);
        s += idf * tf * (k1_ + 1.0) / (tf + norm);
    }
    return s;
}

std::vector<Scored> Bm25Index::rank(std::string_view query) const {
    std::vector<Scored> out;
    out.reserve(lengths_.size());
    for (std::size_t i = 0; i < lengths_.size(); ++i) out.push_back({i, score(query, i)});
    sort_scored(out);
    return out;
}

std::vector<Scored> bm25_rank(std::string_view query, const std::vector<std::string>& documents,
                              const RetrievalConfig& cfg) {
    return Bm25Index(documents, cfg.bm25_k1, cfg.bm25_b).rank(query);
}

std::vector<Scored> rrf_fuse(const std::vector<std::vector<std::size_t>>& rankings, double rrf_k) {
    std::map<std::size_t, double> acc;
    for (const auto& r : rankings) {
        for (std::size_t pos = 0; pos < r.size(); ++pos) {
            acc[r[pos]] += 1.0 / (rrf_k + static_cast<double>(pos + 1));
        }
    }
    std::vector<Scored> out;
    out.reserve(acc.size());
    for (const auto& [idx, s] : acc) out.push_back({idx, s});
    sort_scored(out);
    return out;
}

std::vector<Scored> dense_rank(std::string_view query, const std::vector<std::string>& documents,
                               providers::Embedder& embedder) {
    std::vector<std::string> batch;
    batch.reserve(documents.size() + 1);
    batch.emplace_back(query);
    batch.insert(batch.end(), documents.begin(), documents.end());
    auto vecs = embedder.embed(batch);
    if (vecs.size() != batch.size()) throw ProtocolError("embedder returned a different number of vectors");
    std::vector<Scored> out;
    out.reserve(documents.size());
    for (std::size_t i = 0; i < documents.size(); ++i) out.push_back({i, providers::cosine(vecs[0], vecs[i + 1])});
    sort_scored(out);
    return out;
}

std::string V1Paragraph::passage() const { return section_title + "\n" + text; }

std::vector<V1Paragraph> paragraphs_of(const corpus::DocumentGraph& doc) {
    std::vector<V1Paragraph> out;
    for (std::size_t s = 0; s < doc.sections.size(); ++s) {
        const auto& sec = doc.sections[s];
        for (std::size_t p = 0; p < sec.paragraphs.size(); ++p) {
            std::vector<std::string> parts;
            for (const auto& sn : sec.paragraphs[p].sentences) parts.push_back(sn.text);
            if (parts.empty()) continue;
            out.push_back({s, p, sec.title, text::join(parts, " ")});
        }
    }
    return out;
}

RetrievalResult retrieve_v1(std::string_view review_segment, const corpus::DocumentGraph& v1,
                            providers::Embedder* embedder, providers::Reranker* reranker,
                            const RetrievalConfig& cfg) {
    cfg.validate();
    auto paras = paragraphs_of(v1);
    if (paras.empty()) throw ValidationError("document " + v1.doc_id + " has no paragraphs to retrieve from");
    std::vector<std::string> passages;
    passages.reserve(paras.size());
    for (const auto& p : paras) passages.push_back(p.passage());

    RetrievalResult res;
    std::vector<std::vector<std::size_t>> rankings;
    {
        std::vector<std::size_t> sparse;
        for (const auto& s : bm25_rank(review_segment, passages, cfg))
            if (s.score > 0.0) sparse.push_back(s.index);
        rankings.push_back(std::move(sparse));
    }
    if (embedder) {
        try {
            std::vector<std::size_t> dense;
            for (const auto& s : dense_rank(review_segment, passages, *embedder)) dense.push_back(s.index);
            rankings.push_back(std::move(dense));
        } catch (const ProviderError& e) {
            res.degraded = true;
            res.warnings.push_back(std::string("dense retrieval failed, using BM25 only: ") + e.what());
        }
    }

    auto fused = rrf_fuse(rankings, cfg.rrf_k);
    {
        std::vector<bool> seen(paras.size(), false);
        for (const auto& f : fused) seen[f.index] = true;
        for (std::size_t i = 0; i < paras.size(); ++i)
            if (!seen[i]) fused.push_back({i, 0.0});
    }
    if (fused.size() > cfg.candidate_pool) fused.resize(cfg.candidate_pool);

    if (reranker) {
        std::vector<std::string> cands;
        cands.reserve(fused.size());
        for (const auto& f : fused) cands.push_back(passages[f.index]);
        try {
            auto scores = reranker->score(review_segment, cands);
            if (scores.size() != cands.size()) throw ProtocolError("reranker returned a different number of scores");
            std::vector<std::size_t> order(fused.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
            std::vector<Scored> reranked;
            reranked.reserve(order.size());
            for (auto o : order) reranked.push_back({fused[o].index, scores[o]});
            fused = std::move(reranked);
        } catch (const ProviderError& e) {
            res.degraded = true;
            res.warnings.push_back(std::string("reranker failed, using fused order: ") + e.what());
        }
    }

    std::size_t k = std::min(cfg.k_final, fused.size());
    for (std::size_t i = 0; i < k; ++i) res.results.push_back({paras[fused[i].index], fused[i].index, fused[i].score});
    return res;
}

}  // namespace respkit::retrieval
