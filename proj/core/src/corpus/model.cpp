#include "respkit/corpus/model.hpp"

#include <algorithm>
#include <unordered_set>

#include "respkit/error.hpp"

namespace respkit::corpus {

std::string_view to_string(DocKind k) {
    switch (k) {
        case DocKind::PaperV1: return "paper_v1";
        case DocKind::PaperV2: return "paper_v2";
        case DocKind::Review: return "review";
        case DocKind::Response: return "response";
    }
    return "review";
}

std::optional<DocKind> parse_doc_kind(std::string_view s) {
    if (s == "paper_v1") return DocKind::PaperV1;
    if (s == "paper_v2") return DocKind::PaperV2;
    if (s == "review") return DocKind::Review;
    if (s == "response") return DocKind::Response;
    return std::nullopt;
}

std::string_view to_string(Venue v) { return v == Venue::Conference ? "conference" : "journal"; }

std::optional<Venue> parse_venue(std::string_view s) {
    if (s == "conference") return Venue::Conference;
    if (s == "journal") return Venue::Journal;
    return std::nullopt;
}

std::string_view to_string(AlignSource s) {
    switch (s) {
        case AlignSource::CeSim: return "CE_sim";
        case AlignSource::CeCls: return "CE_cls";
        case AlignSource::AeSim: return "AE_sim";
        case AlignSource::AeCls: return "AE_cls";
    }
    return "CE_sim";
}

std::optional<AlignSource> parse_align_source(std::string_view s) {
    for (AlignSource src : {AlignSource::CeSim, AlignSource::CeCls, AlignSource::AeSim, AlignSource::AeCls}) {
        if (to_string(src) == s) return src;
    }
    return std::nullopt;
}

std::vector<AlignSource> Provenance::sources() const {
    std::vector<AlignSource> out;
    for (AlignSource src : {AlignSource::CeSim, AlignSource::CeCls, AlignSource::AeSim, AlignSource::AeCls}) {
        if (has(src)) out.push_back(src);
    }
    return out;
}

std::vector<const SentenceNode*> DocumentGraph::sentences() const {
    std::vector<const SentenceNode*> out;
    for (const auto& sec : sections)
        for (const auto& par : sec.paragraphs)
            for (const auto& s : par.sentences) out.push_back(&s);
    return out;
}

std::size_t DocumentGraph::sentence_count() const {
    std::size_t n = 0;
    for (const auto& sec : sections)
        for (const auto& par : sec.paragraphs) n += par.sentences.size();
    return n;
}

std::string DocumentGraph::text() const {
    std::string out;
    for (const auto* s : sentences()) {
        if (!out.empty()) out.push_back(' ');
        out += s->text;
    }
    return out;
}

std::vector<ResponseAction> ResponsePlan::flattened() const {
    std::vector<ResponseAction> out;
    for (const auto& item : items) out.insert(out.end(), item.actions.begin(), item.actions.end());
    return out;
}

bool ResponsePlan::empty() const {
    return std::all_of(items.begin(), items.end(), [](const ItemPlan& p) { return p.actions.empty(); });
}

const PaperBundle* Corpus::find_paper(std::string_view paper_id) const {
    auto it = paper_index_.find(std::string(paper_id));
    return it == paper_index_.end() ? nullptr : &papers_[it->second];
}

const DocumentGraph* Corpus::find_document(std::string_view doc_id) const {
    auto it = doc_index_.find(std::string(doc_id));
    return it == doc_index_.end() ? nullptr : &documents_[it->second];
}

std::optional<SentenceLocation> Corpus::locate(std::string_view sentence_id) const {
    auto it = sentence_index_.find(std::string(sentence_id));
    if (it == sentence_index_.end()) return std::nullopt;
    return it->second;
}

const SentenceNode* Corpus::find_sentence(std::string_view sentence_id) const {
    auto loc = locate(sentence_id);
    if (!loc) return nullptr;
    return &documents_[loc->document].sections[loc->section].paragraphs[loc->paragraph].sentences[loc->sentence];
}

const std::string& Corpus::sentence_text(std::string_view sentence_id) const {
    const auto* s = find_sentence(sentence_id);
    if (!s) throw ValidationError("unknown sentence id '" + std::string(sentence_id) + "'");
    return s->text;
}

const SentenceEdit* Corpus::find_edit(std::string_view edit_id) const {
    auto it = edit_index_.find(std::string(edit_id));
    return it == edit_index_.end() ? nullptr : &edits_[it->second];
}

std::vector<const DocumentGraph*> Corpus::documents_of(const PaperBundle& paper, DocKind kind) const {
    std::vector<const DocumentGraph*> out;
    for (std::size_t i : paper.documents) {
        if (documents_[i].kind == kind) out.push_back(&documents_[i]);
    }
    return out;
}

std::vector<const SentenceEdit*> Corpus::edits_of(const PaperBundle& paper) const {
    std::vector<const SentenceEdit*> out;
    out.reserve(paper.edits.size());
    for (std::size_t i : paper.edits) out.push_back(&edits_[i]);
    return out;
}

void CorpusBuilder::add_document(DocumentGraph doc) { documents_.push_back(std::move(doc)); }

void CorpusBuilder::add_edit(SentenceEdit edit) {
    edit.ordinal = edits_.size();
    if (edit.edit_id.empty()) edit.edit_id = "e" + std::to_string(edit.ordinal);
    edits_.push_back(std::move(edit));
}

void CorpusBuilder::add_warning(std::string w) { warnings_.push_back(std::move(w)); }

Corpus CorpusBuilder::build() && {
    Corpus c;
    c.documents_ = std::move(documents_);
    c.edits_ = std::move(edits_);
    c.warnings_ = std::move(warnings_);

    for (std::size_t d = 0; d < c.documents_.size(); ++d) {
        const auto& doc = c.documents_[d];
        if (doc.doc_id.empty()) throw ValidationError("document without doc_id");
        if (doc.paper_id.empty()) throw ValidationError("document '" + doc.doc_id + "' without paper_id");
        if (!c.doc_index_.emplace(doc.doc_id, d).second)
            throw ValidationError("duplicate doc_id '" + doc.doc_id + "'");
        for (std::size_t s = 0; s < doc.sections.size(); ++s) {
            for (std::size_t p = 0; p < doc.sections[s].paragraphs.size(); ++p) {
                const auto& sents = doc.sections[s].paragraphs[p].sentences;
                for (std::size_t k = 0; k < sents.size(); ++k) {
                    if (sents[k].id.empty())
                        throw ValidationError("sentence without id in document '" + doc.doc_id + "'");
                    if (!c.sentence_index_.emplace(sents[k].id, SentenceLocation{d, s, p, k}).second)
                        throw ValidationError("duplicate sentence id '" + sents[k].id + "'");
                }
            }
        }
        auto [it, inserted] = c.paper_index_.emplace(doc.paper_id, c.papers_.size());
        if (inserted) c.papers_.push_back(PaperBundle{doc.paper_id, {}, {}, std::nullopt});
        auto& bundle = c.papers_[it->second];
        bundle.documents.push_back(d);
        if (!bundle.venue && doc.venue) bundle.venue = doc.venue;
    }

    for (const auto& doc : c.documents_) {
        if (doc.kind != DocKind::Response || doc.in_reply_to.empty()) continue;
        const auto* target = c.find_document(doc.in_reply_to);
        if (!target) {
            throw ValidationError("response '" + doc.doc_id + "' replies to unknown document '" + doc.in_reply_to +
                                  "'");
        }
        if (target->kind != DocKind::Review || target->paper_id != doc.paper_id) {
            throw ValidationError("response '" + doc.doc_id + "' must reply to a review of the same paper");
        }
    }

    auto check_side = [&](const SentenceEdit& e, const std::optional<std::string>& id, DocKind expected,
                          std::string& paper) {
        if (!id) return;
        auto loc = c.locate(*id);
        if (!loc) throw ValidationError("edit '" + e.edit_id + "' references unknown sentence id '" + *id + "'");
        const auto& doc = c.documents_[loc->document];
        if (doc.kind != expected) {
            throw ValidationError("edit '" + e.edit_id + "' sentence '" + *id + "' is not in a " +
                                  std::string(to_string(expected)) + " document");
        }
        if (!paper.empty() && paper != doc.paper_id)
            throw ValidationError("edit '" + e.edit_id + "' spans two papers");
        paper = doc.paper_id;
    };

    for (std::size_t i = 0; i < c.edits_.size(); ++i) {
        const auto& e = c.edits_[i];
        if (!e.old_id && !e.new_id) throw ValidationError("edit '" + e.edit_id + "' has neither old nor new side");
        if (!c.edit_index_.emplace(e.edit_id, i).second)
            throw ValidationError("duplicate edit id '" + e.edit_id + "'");
        std::string paper;
        check_side(e, e.old_id, DocKind::PaperV1, paper);
        check_side(e, e.new_id, DocKind::PaperV2, paper);
        c.papers_[c.paper_index_.at(paper)].edits.push_back(i);
    }
    return c;
}

CorpusStats corpus_stats(const Corpus& corpus, const std::vector<ReviewResponsePair>& pairs,
                         const std::vector<Re3Triplet>& triplets) {
    CorpusStats st;
    st.papers = corpus.papers().size();
    st.pairs = pairs.size();
    st.edits = corpus.edits().size();
    st.triplets = triplets.size();
    for (const auto& t : triplets) st.linked_edits += t.aligned_edits.size();
    return st;
}

}  // namespace respkit::corpus
