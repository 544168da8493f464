#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "respkit/corpus/model.hpp"

namespace respkit::corpus {

/// Splits raw text into sentences.
class SentenceSegmenter {
public:
    virtual ~SentenceSegmenter() = default;
    virtual std::vector<std::string> split(std::string_view text) const = 0;
};

/// Punctuation-driven splitter. Breaks after . ! ? (plus closing quotes/brackets) when
/// followed by whitespace and an uppercase letter, digit, quote, '>' or bracket, except
/// after common abbreviations (e.g., i.e., et al., Fig., Eq., ...). Newlines are
/// boundaries before quote or list markers ("> ...", "1.", "Q:"), after terminal
/// punctuation and after a "> " line; other line breaks inside a paragraph are treated as spaces.
class RuleBasedSegmenter final : public SentenceSegmenter {
public:
    std::vector<std::string> split(std::string_view text) const override;
};

/// Builds a document from plain text. Blank lines separate paragraphs; a line starting
/// with '#' opens a new section titled by the rest of the line. Sentence ids are
/// "<doc_id>.s<n>", numbered from 0 in document order.
DocumentGraph document_from_text(std::string doc_id, std::string paper_id, DocKind kind, std::string_view text,
                                 const SentenceSegmenter& segmenter);

}  // namespace respkit::corpus
