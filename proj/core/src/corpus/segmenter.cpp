#include "respkit/corpus/segmenter.hpp"

#include <array>
#include <cctype>

#include "respkit/util/text.hpp"

namespace respkit::corpus {

namespace {

constexpr std::array<std::string_view, 22> kAbbreviations{
    "e.g.", "i.e.", "al.", "etc.", "fig.", "figs.", "eq.", "eqs.", "sec.", "tab.", "vs.",
    "cf.", "dr.", "mr.", "ms.", "prof.", "no.", "approx.", "resp.", "ref.", "refs.", "ch."};

bool ends_with_abbreviation(std::string_view sentence) {
    auto last_space = sentence.find_last_of(" \t(");
    std::string_view last = last_space == std::string_view::npos ? sentence : sentence.substr(last_space + 1);
    std::string lower = text::ascii_lower(last);
    for (auto abbr : kAbbreviations) {
        if (lower == abbr) return true;
    }
    // Single capital initial such as "J." in "J. Smith".
    return last.size() == 2 && std::isupper(static_cast<unsigned char>(last[0])) && last[1] == '.';
}

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

bool starts_sentence(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isupper(u) || std::isdigit(u) || c == '"' || c == '\'' || c == '(' || c == '[' || c == '>' ||
           u >= 0x80;
}

void split_line(std::string_view line, std::vector<std::string>& out) {
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == '.' || c == '!' || c == '?') {
            std::size_t end = i + 1;
            while (end < line.size() && (line[end] == '.' || line[end] == '!' || line[end] == '?')) ++end;
            while (end < line.size() && is_closer(line[end])) ++end;
            std::size_t next = end;
            while (next < line.size() && (line[next] == ' ' || line[next] == '\t')) ++next;
            bool boundary = next > end && next < line.size() && starts_sentence(line[next]);
            if (boundary && c == '.' && ends_with_abbreviation(line.substr(start, end - start))) boundary = false;
            if (boundary) {
                auto sent = text::collapse_whitespace(line.substr(start, end - start));
                if (!sent.empty()) out.push_back(std::move(sent));
                start = next;
                i = next;
                continue;
            }
            i = end;
            continue;
        }
        ++i;
    }
    auto tail = text::collapse_whitespace(line.substr(start));
    if (!tail.empty()) out.push_back(std::move(tail));
}

bool starts_block(std::string_view line) {
    char c = line.front();
    if (c == '>' || c == '-' || c == '*' || c == '#') return true;
    if (line.size() >= 2 && (line.substr(0, 2) == "Q:" || line.substr(0, 2) == "A:")) return true;
    std::size_t d = 0;
    while (d < line.size() && std::isdigit(static_cast<unsigned char>(line[d]))) ++d;
    return d > 0 && d < line.size() && (line[d] == '.' || line[d] == ')');
}

bool ends_block(std::string_view line) {
    char c = line.back();
    return c == '.' || c == '!' || c == '?' || c == ':' || c == '"' || c == ')';
}

}  // namespace

std::vector<std::string> RuleBasedSegmenter::split(std::string_view textv) const {
    // Wrapped prose lines are joined; a newline stays a hard boundary before quote or
    // list markers, after terminal punctuation and after a quoted line.
    std::vector<std::string> logical;
    std::size_t pos = 0;
    while (pos <= textv.size()) {
        auto nl = textv.find('\n', pos);
        auto line = text::trim(textv.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        if (!line.empty()) {
            bool hard = logical.empty() || starts_block(line) || ends_block(logical.back()) ||
                        logical.back().front() == '>';
            if (hard) {
                logical.emplace_back(line);
            } else {
                logical.back().push_back(' ');
                logical.back().append(line);
            }
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    std::vector<std::string> out;
    for (const auto& l : logical) split_line(l, out);
    return out;
}

DocumentGraph document_from_text(std::string doc_id, std::string paper_id, DocKind kind, std::string_view textv,
                                 const SentenceSegmenter& segmenter) {
    DocumentGraph doc;
    doc.doc_id = std::move(doc_id);
    doc.paper_id = std::move(paper_id);
    doc.kind = kind;
    doc.sections.emplace_back();

    std::size_t counter = 0;
    std::string paragraph;
    auto flush = [&] {
        auto sents = segmenter.split(paragraph);
        paragraph.clear();
        if (sents.empty()) return;
        Paragraph par;
        for (auto& s : sents) par.sentences.push_back({doc.doc_id + ".s" + std::to_string(counter++), std::move(s)});
        doc.sections.back().paragraphs.push_back(std::move(par));
    };

    std::size_t pos = 0;
    while (pos <= textv.size()) {
        auto nl = textv.find('\n', pos);
        auto line = textv.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        auto trimmed = text::trim(line);
        if (trimmed.empty()) {
            flush();
        } else if (trimmed.front() == '#') {
            flush();
            auto hashes = trimmed.find_first_not_of('#');
            auto title = hashes == std::string_view::npos ? std::string_view{} : text::trim(trimmed.substr(hashes));
            if (doc.sections.back().paragraphs.empty() && doc.sections.back().title.empty()) {
                doc.sections.back().title = std::string(title);
            } else {
                doc.sections.push_back(Section{std::string(title), {}});
            }
        } else {
            paragraph.append(line);
            paragraph.push_back('\n');
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    flush();
    return doc;
}

}  // namespace respkit::corpus
