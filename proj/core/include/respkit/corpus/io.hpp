#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "respkit/corpus/model.hpp"

namespace respkit::corpus {

/// Edit action labels known to the bundled tooling. Others pass through with a warning.
const std::vector<std::string>& known_edit_actions();
const std::vector<std::string>& known_edit_intents();

nlohmann::json to_json(const DocumentGraph& doc);
nlohmann::json to_json(const SentenceEdit& edit);
/// Throws std::invalid_argument (wrapped into ParseError by the loaders) on missing fields.
DocumentGraph document_from_json(const nlohmann::json& j);
SentenceEdit edit_from_json(const nlohmann::json& j);

/// Parses one JSONL stream of document and edit records (records with a `kind` field are
/// documents, the rest are edits) into `builder`. `source` names the stream in errors.
void read_records(std::istream& in, const std::string& source, CorpusBuilder& builder);

/// Loads every *.jsonl file under `dir` (non-recursive, sorted by name). Files are parsed
/// in parallel; records are merged in file order. An empty directory yields an empty corpus.
Corpus load_corpus(const std::filesystem::path& dir, unsigned threads = 0);
Corpus load_corpus_stream(std::istream& in, const std::string& source = "<stream>");

/// Canonical JSONL: documents then edits, in load order, keys sorted, one record per line.
std::string serialize_corpus(const Corpus& corpus);

/// Self-contained pair record: sentence texts are embedded next to their ids.
nlohmann::json pair_to_json(const ReviewResponsePair& pair, const Corpus* corpus);
ReviewResponsePair pair_from_json(const nlohmann::json& j);

nlohmann::json triplet_to_json(const Re3Triplet& t, const Corpus* corpus);
Re3Triplet triplet_from_json(const nlohmann::json& j);

/// {"id", "type", "text"}.
nlohmann::json to_json(const ReviewItem& item);
/// Throws ValidationError for unknown item types or empty spans.
ReviewItem review_item_from_json(const nlohmann::json& j);

/// [{"item_id", "actions": [label, ...]}, ...].
nlohmann::json to_json(const ResponsePlan& plan);
/// Throws ValidationError for labels outside the action taxonomy.
ResponsePlan plan_from_json(const nlohmann::json& j);

/// Reads a JSONL file, one object per non-blank line.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& file);
void write_jsonl(const std::filesystem::path& file, const std::vector<nlohmann::json>& rows);

}  // namespace respkit::corpus
