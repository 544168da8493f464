#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "respkit/corpus/taxonomy.hpp"

namespace respkit::corpus {

enum class DocKind { PaperV1, PaperV2, Review, Response };

std::string_view to_string(DocKind k);
std::optional<DocKind> parse_doc_kind(std::string_view s);

enum class Venue { Conference, Journal };

std::string_view to_string(Venue v);
std::optional<Venue> parse_venue(std::string_view s);

struct SentenceNode {
    std::string id;
    std::string text;
};

struct Paragraph {
    std::vector<SentenceNode> sentences;
};

struct Section {
    std::string title;
    std::vector<Paragraph> paragraphs;
};

/// A paper version, review or response as ordered sections, paragraphs and sentences.
struct DocumentGraph {
    std::string doc_id;
    std::string paper_id;
    DocKind kind = DocKind::Review;
    /// Reviews and responses: the reviewer thread this document belongs to.
    std::string reviewer_id;
    /// Responses: doc_id of the review being answered. May be empty.
    std::string in_reply_to;
    std::optional<Venue> venue;
    std::vector<Section> sections;

    /// All sentences in document order.
    std::vector<const SentenceNode*> sentences() const;
    std::size_t sentence_count() const;
    std::string text() const;
};

/// An aligned (old, new) sentence pair across paper versions.
/// At least one side is present; a missing side is an addition or deletion.
struct SentenceEdit {
    std::string edit_id;
    std::optional<std::string> old_id;
    std::optional<std::string> new_id;
    std::string action;
    std::string intent;
    /// Position of the edit in load order; the canonical sort key.
    std::size_t ordinal = 0;
};

struct ReviewResponsePair {
    std::string pair_id;
    std::string paper_id;
    std::string review_doc_id;
    std::string response_doc_id;
    std::string reviewer_id;
    std::vector<std::string> review_sentences;
    std::vector<std::string> response_sentences;
};

enum class AlignSource : std::uint8_t { CeSim = 1, CeCls = 2, AeSim = 4, AeCls = 8 };

std::string_view to_string(AlignSource s);
std::optional<AlignSource> parse_align_source(std::string_view s);

/// Bit set over AlignSource.
struct Provenance {
    std::uint8_t bits = 0;

    void add(AlignSource s) { bits |= static_cast<std::uint8_t>(s); }
    bool has(AlignSource s) const { return (bits & static_cast<std::uint8_t>(s)) != 0; }
    bool empty() const { return bits == 0; }
    std::vector<AlignSource> sources() const;
    bool operator==(const Provenance&) const = default;
};

struct AlignedEdit {
    std::string edit_id;
    std::size_t ordinal = 0;
    Provenance provenance;
};

/// (review segment, response segment, aligned edits).
struct Re3Triplet {
    ReviewResponsePair pair;
    std::vector<AlignedEdit> aligned_edits;
    /// Set when a classifier failed for this pair and only similarity results were kept.
    bool degraded = false;
    std::vector<std::string> errors;
};

struct ReviewItem {
    std::string item_id;
    ItemType type = ItemType::Criticism;
    std::string span;
};

/// Per review item, the ordered response actions an author plans to use.
struct ItemPlan {
    std::string item_id;
    std::vector<ResponseAction> actions;
};

struct ResponsePlan {
    std::vector<ItemPlan> items;

    /// Plan actions in item order, then in per-item order.
    std::vector<ResponseAction> flattened() const;
    bool empty() const;
};

struct SentenceLocation {
    std::size_t document = 0;
    std::size_t section = 0;
    std::size_t paragraph = 0;
    std::size_t sentence = 0;
};

/// Documents and edits that share a paper identifier.
struct PaperBundle {
    std::string paper_id;
    std::vector<std::size_t> documents;
    std::vector<std::size_t> edits;
    std::optional<Venue> venue;
};

class CorpusBuilder;

/// An immutable, validated corpus. Safe to share across threads.
class Corpus {
public:
    Corpus() = default;

    const std::vector<DocumentGraph>& documents() const { return documents_; }
    const std::vector<SentenceEdit>& edits() const { return edits_; }
    const std::vector<PaperBundle>& papers() const { return papers_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    const PaperBundle* find_paper(std::string_view paper_id) const;
    const DocumentGraph* find_document(std::string_view doc_id) const;
    const SentenceNode* find_sentence(std::string_view sentence_id) const;
    std::optional<SentenceLocation> locate(std::string_view sentence_id) const;
    const SentenceEdit* find_edit(std::string_view edit_id) const;

    /// Documents of one kind inside a paper bundle, in load order.
    std::vector<const DocumentGraph*> documents_of(const PaperBundle& paper, DocKind kind) const;
    std::vector<const SentenceEdit*> edits_of(const PaperBundle& paper) const;

    /// Text of a sentence by id. Throws ValidationError for unknown ids.
    const std::string& sentence_text(std::string_view sentence_id) const;

private:
    friend class CorpusBuilder;

    std::vector<DocumentGraph> documents_;
    std::vector<SentenceEdit> edits_;
    std::vector<PaperBundle> papers_;
    std::vector<std::string> warnings_;
    std::unordered_map<std::string, std::size_t> doc_index_;
    std::unordered_map<std::string, SentenceLocation> sentence_index_;
    std::unordered_map<std::string, std::size_t> edit_index_;
    std::unordered_map<std::string, std::size_t> paper_index_;
};

/// Accumulates documents and edits, then validates cross references in build().
class CorpusBuilder {
public:
    void add_document(DocumentGraph doc);
    /// Edits without an id get "e<ordinal>".
    void add_edit(SentenceEdit edit);
    void add_warning(std::string w);

    /// Throws ValidationError on duplicate ids or dangling sentence references.
    Corpus build() &&;

private:
    std::vector<DocumentGraph> documents_;
    std::vector<SentenceEdit> edits_;
    std::vector<std::string> warnings_;
};

struct CorpusStats {
    std::size_t papers = 0;
    std::size_t pairs = 0;
    std::size_t edits = 0;
    /// Sum over triplets of aligned edits, i.e. (pair, edit) links.
    std::size_t linked_edits = 0;
    std::size_t triplets = 0;
    bool operator==(const CorpusStats&) const = default;
};

CorpusStats corpus_stats(const Corpus& corpus, const std::vector<ReviewResponsePair>& pairs,
                         const std::vector<Re3Triplet>& triplets);

}  // namespace respkit::corpus
