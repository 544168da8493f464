#include "respkit/corpus/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "respkit/error.hpp"
#include "respkit/util/parallel.hpp"

namespace respkit::corpus {

using nlohmann::json;

const std::vector<std::string>& known_edit_actions() {
    static const std::vector<std::string> actions{"Add", "Delete", "Modify"};
    return actions;
}

const std::vector<std::string>& known_edit_intents() {
    static const std::vector<std::string> intents{"Grammar", "Clarity", "Fact/Evidence", "Claim", "Other"};
    return intents;
}

namespace {

const json& require(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw std::invalid_argument(std::string("missing field '") + key + "'");
    return *it;
}

std::string require_string(const json& j, const char* key) {
    const auto& v = require(j, key);
    if (!v.is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::string optional_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return {};
    if (!it->is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

std::optional<std::string> nullable_id(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string or null");
    return it->get<std::string>();
}

bool known(const std::vector<std::string>& labels, const std::string& v) {
    return std::find(labels.begin(), labels.end(), v) != labels.end();
}

struct FileRecords {
    std::vector<DocumentGraph> docs;
    std::vector<SentenceEdit> edits;
    std::vector<std::string> warnings;
};

void parse_stream(std::istream& in, const std::string& source, FileRecords& out) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(source, lineno, std::string("malformed JSON: ") + e.what());
        }
        if (!j.is_object()) throw ParseError(source, lineno, "record must be a JSON object");
        try {
            if (j.contains("kind")) {
                out.docs.push_back(document_from_json(j));
            } else {
                auto e = edit_from_json(j);
                if (!known(known_edit_actions(), e.action))
                    out.warnings.push_back(source + ":" + std::to_string(lineno) + ": unknown edit action '" +
                                           e.action + "'");
                if (!known(known_edit_intents(), e.intent))
                    out.warnings.push_back(source + ":" + std::to_string(lineno) + ": unknown edit intent '" +
                                           e.intent + "'");
                out.edits.push_back(std::move(e));
            }
        } catch (const std::exception& e) {
            throw ParseError(source, lineno, e.what());
        }
    }
}

json sentences_with_text(const std::vector<std::string>& ids, const Corpus* corpus) {
    json arr = json::array();
    for (const auto& id : ids) {
        json s{{"id", id}};
        if (corpus) s["text"] = corpus->sentence_text(id);
        arr.push_back(std::move(s));
    }
    return arr;
}

std::vector<std::string> ids_of(const json& arr) {
    std::vector<std::string> out;
    for (const auto& s : arr) out.push_back(s.is_string() ? s.get<std::string>() : require_string(s, "id"));
    return out;
}

}  // namespace

json to_json(const DocumentGraph& doc) {
    json sections = json::array();
    for (const auto& sec : doc.sections) {
        json paragraphs = json::array();
        for (const auto& par : sec.paragraphs) {
            json sents = json::array();
            for (const auto& s : par.sentences) sents.push_back({{"id", s.id}, {"text", s.text}});
            paragraphs.push_back({{"sentences", std::move(sents)}});
        }
        sections.push_back({{"title", sec.title}, {"paragraphs", std::move(paragraphs)}});
    }
    json j{{"kind", to_string(doc.kind)},
           {"paper_id", doc.paper_id},
           {"doc_id", doc.doc_id},
           {"sections", std::move(sections)}};
    if (!doc.reviewer_id.empty()) j["reviewer_id"] = doc.reviewer_id;
    if (!doc.in_reply_to.empty()) j["in_reply_to"] = doc.in_reply_to;
    if (doc.venue) j["venue"] = to_string(*doc.venue);
    return j;
}

json to_json(const SentenceEdit& e) {
    return json{{"edit_id", e.edit_id},
                {"old_id", e.old_id ? json(*e.old_id) : json(nullptr)},
                {"new_id", e.new_id ? json(*e.new_id) : json(nullptr)},
                {"action", e.action},
                {"intent", e.intent}};
}

DocumentGraph document_from_json(const json& j) {
    DocumentGraph doc;
    auto kind = require_string(j, "kind");
    auto parsed = parse_doc_kind(kind);
    if (!parsed) throw std::invalid_argument("unknown document kind '" + kind + "'");
    doc.kind = *parsed;
    doc.paper_id = require_string(j, "paper_id");
    doc.doc_id = require_string(j, "doc_id");
    doc.reviewer_id = optional_string(j, "reviewer_id");
    doc.in_reply_to = optional_string(j, "in_reply_to");
    if (auto v = optional_string(j, "venue"); !v.empty()) {
        doc.venue = parse_venue(v);
        if (!doc.venue) throw std::invalid_argument("unknown venue '" + v + "'");
    }
    const auto& sections = require(j, "sections");
    if (!sections.is_array()) throw std::invalid_argument("'sections' must be an array");
    for (const auto& sj : sections) {
        Section sec;
        sec.title = optional_string(sj, "title");
        for (const auto& pj : require(sj, "paragraphs")) {
            Paragraph par;
            for (const auto& s : require(pj, "sentences")) {
                par.sentences.push_back(SentenceNode{require_string(s, "id"), require_string(s, "text")});
            }
            sec.paragraphs.push_back(std::move(par));
        }
        doc.sections.push_back(std::move(sec));
    }
    return doc;
}

SentenceEdit edit_from_json(const json& j) {
    SentenceEdit e;
    e.edit_id = optional_string(j, "edit_id");
    e.old_id = nullable_id(j, "old_id");
    e.new_id = nullable_id(j, "new_id");
    if (!j.contains("old_id") && !j.contains("new_id"))
        throw std::invalid_argument("edit record needs 'old_id' and/or 'new_id'");
    e.action = require_string(j, "action");
    e.intent = require_string(j, "intent");
    return e;
}

void read_records(std::istream& in, const std::string& source, CorpusBuilder& builder) {
    FileRecords recs;
    parse_stream(in, source, recs);
    for (auto& d : recs.docs) builder.add_document(std::move(d));
    for (auto& e : recs.edits) builder.add_edit(std::move(e));
    for (auto& w : recs.warnings) builder.add_warning(std::move(w));
}

Corpus load_corpus(const std::filesystem::path& dir, unsigned threads) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ValidationError("corpus directory '" + dir.string() + "' does not exist");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<FileRecords> parsed(files.size());
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    util::parallel_for(files.size(), workers, [&](std::size_t i) {
        std::ifstream in(files[i]);
        if (!in) throw ValidationError("cannot open '" + files[i].string() + "'");
        parse_stream(in, files[i].string(), parsed[i]);
    });

    CorpusBuilder builder;
    for (auto& recs : parsed) {
        for (auto& d : recs.docs) builder.add_document(std::move(d));
        for (auto& e : recs.edits) builder.add_edit(std::move(e));
        for (auto& w : recs.warnings) builder.add_warning(std::move(w));
    }
    return std::move(builder).build();
}

Corpus load_corpus_stream(std::istream& in, const std::string& source) {
    CorpusBuilder builder;
    read_records(in, source, builder);
    return std::move(builder).build();
}

std::string serialize_corpus(const Corpus& corpus) {
    std::string out;
    for (const auto& d : corpus.documents()) {
        out += to_json(d).dump();
        out.push_back('\n');
    }
    for (const auto& e : corpus.edits()) {
        out += to_json(e).dump();
        out.push_back('\n');
    }
    return out;
}

json pair_to_json(const ReviewResponsePair& p, const Corpus* corpus) {
    return json{{"pair_id", p.pair_id},
                {"paper_id", p.paper_id},
                {"review_doc_id", p.review_doc_id},
                {"response_doc_id", p.response_doc_id},
                {"reviewer_id", p.reviewer_id},
                {"review_sentences", sentences_with_text(p.review_sentences, corpus)},
                {"response_sentences", sentences_with_text(p.response_sentences, corpus)}};
}

ReviewResponsePair pair_from_json(const json& j) {
    ReviewResponsePair p;
    p.pair_id = require_string(j, "pair_id");
    p.paper_id = require_string(j, "paper_id");
    p.review_doc_id = optional_string(j, "review_doc_id");
    p.response_doc_id = optional_string(j, "response_doc_id");
    p.reviewer_id = optional_string(j, "reviewer_id");
    p.review_sentences = ids_of(require(j, "review_sentences"));
    p.response_sentences = ids_of(require(j, "response_sentences"));
    return p;
}

json triplet_to_json(const Re3Triplet& t, const Corpus* corpus) {
    json edits = json::array();
    for (const auto& ae : t.aligned_edits) {
        json prov = json::array();
        for (auto src : ae.provenance.sources()) prov.push_back(to_string(src));
        json ej{{"edit_id", ae.edit_id}, {"provenance", std::move(prov)}};
        if (corpus) {
            if (const auto* e = corpus->find_edit(ae.edit_id)) {
                ej["old_id"] = e->old_id ? json(*e->old_id) : json(nullptr);
                ej["new_id"] = e->new_id ? json(*e->new_id) : json(nullptr);
                ej["action"] = e->action;
                ej["intent"] = e->intent;
                ej["old_text"] = e->old_id ? json(corpus->sentence_text(*e->old_id)) : json(nullptr);
                ej["new_text"] = e->new_id ? json(corpus->sentence_text(*e->new_id)) : json(nullptr);
            }
        }
        edits.push_back(std::move(ej));
    }
    json j{{"pair", pair_to_json(t.pair, corpus)}, {"aligned_edits", std::move(edits)}, {"degraded", t.degraded}};
    if (!t.errors.empty()) j["errors"] = t.errors;
    return j;
}

Re3Triplet triplet_from_json(const json& j) {
    Re3Triplet t;
    t.pair = pair_from_json(require(j, "pair"));
    for (const auto& ej : require(j, "aligned_edits")) {
        AlignedEdit ae;
        ae.edit_id = require_string(ej, "edit_id");
        for (const auto& s : require(ej, "provenance")) {
            auto src = parse_align_source(s.get<std::string>());
            if (!src) throw std::invalid_argument("unknown provenance '" + s.get<std::string>() + "'");
            ae.provenance.add(*src);
        }
        t.aligned_edits.push_back(std::move(ae));
    }
    t.degraded = j.value("degraded", false);
    if (j.contains("errors")) t.errors = j["errors"].get<std::vector<std::string>>();
    return t;
}

json to_json(const ReviewItem& item) {
    return {{"id", item.item_id}, {"type", to_string(item.type)}, {"text", item.span}};
}

ReviewItem review_item_from_json(const json& j) {
    ReviewItem it;
    it.item_id = j.at("id").get<std::string>();
    auto type = j.at("type").get<std::string>();
    auto t = parse_item_type(type);
    if (!t) throw ValidationError("review item " + it.item_id + ": unknown type '" + type + "'");
    it.type = *t;
    it.span = j.at("text").get<std::string>();
    if (it.span.empty()) throw ValidationError("review item " + it.item_id + ": empty span");
    return it;
}

json to_json(const ResponsePlan& plan) {
    json arr = json::array();
    for (const auto& p : plan.items) {
        json labels = json::array();
        for (auto a : p.actions) labels.push_back(to_string(a));
        arr.push_back({{"item_id", p.item_id}, {"actions", labels}});
    }
    return arr;
}

ResponsePlan plan_from_json(const json& j) {
    if (!j.is_array()) throw ValidationError("plan must be an array of {item_id, actions}");
    ResponsePlan plan;
    for (const auto& e : j) {
        ItemPlan ip;
        ip.item_id = e.at("item_id").get<std::string>();
        for (const auto& l : e.at("actions")) {
            auto label = l.get<std::string>();
            auto a = parse_action(label);
            if (!a) throw ValidationError("plan item " + ip.item_id + ": unknown action '" + label + "'");
            ip.actions.push_back(*a);
        }
        plan.items.push_back(std::move(ip));
    }
    return plan;
}

std::vector<json> read_jsonl(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open '" + file.string() + "'");
    std::vector<json> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            rows.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw ParseError(file.string(), lineno, std::string("malformed JSON: ") + e.what());
        }
    }
    return rows;
}

void write_jsonl(const std::filesystem::path& file, const std::vector<json>& rows) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file);
    if (!out) throw ValidationError("cannot write '" + file.string() + "'");
    for (const auto& r : rows) out << r.dump() << '\n';
}

}  // namespace respkit::corpus
