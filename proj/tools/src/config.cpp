#include "respkit/service/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "respkit/error.hpp"
#include "respkit/util/text.hpp"

namespace respkit::service {

namespace {

bool bare_key_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
           c == '.';
}

// Decodes a value and drops a trailing comment. Returns nullopt on malformed input.
std::optional<std::string> decode_value(std::string_view v) {
    v = text::trim(v);
    if (v.empty()) return std::nullopt;
    if (v.front() == '"') {
        std::string out;
        std::size_t i = 1;
        for (; i < v.size() && v[i] != '"'; ++i) {
            if (v[i] != '\\') {
                out += v[i];
                continue;
            }
            if (++i == v.size()) return std::nullopt;
            switch (v[i]) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                default: return std::nullopt;
            }
        }
        if (i == v.size()) return std::nullopt;
        auto rest = text::trim(v.substr(i + 1));
        if (!rest.empty() && rest.front() != '#') return std::nullopt;
        return out;
    }
    if (v.front() == '\'') {
        auto close = v.find('\'', 1);
        if (close == std::string_view::npos) return std::nullopt;
        auto rest = text::trim(v.substr(close + 1));
        if (!rest.empty() && rest.front() != '#') return std::nullopt;
        return std::string(v.substr(1, close - 1));
    }
    auto hash = v.find('#');
    auto bare = text::trim(v.substr(0, hash));
    if (bare.empty() || bare.find_first_of(" \t") != std::string_view::npos) return std::nullopt;
    return std::string(bare);
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = [] {
        std::set<std::string> k;
        for (const char* role : {"generator", "judge", "embedder", "reranker", "ce_classifier", "ae_classifier"})
            for (const char* field : {"kind", "base_url", "model", "api_key_env", "timeout_s", "temperature", "dim"})
                k.insert(std::string(role) + "." + field);
        for (const char* key : {"pair_align.t0_embed", "pair_align.t1_fuzzy", "pair_align.min_segment_sentences",
                                "pair_align.max_segment_sentences", "pair_align.threads", "triplet_align.fuzzy_min",
                                "triplet_align.embed_min", "triplet_align.bigram_min",
                                "triplet_align.classifier_enabled", "triplet_align.max_in_flight",
                                "retrieval.k_final", "retrieval.rrf_k", "retrieval.bm25_k1", "retrieval.bm25_b",
                                "retrieval.candidate_pool", "retry.max_attempts", "retry.backoff_ms",
                                "run.max_in_flight", "run.audit_log"})
            k.insert(key);
        return k;
    }();
    return keys;
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::string_view text, const std::string& source) {
    KeyValueFile kv;
    kv.source_ = source;
    std::string section;
    std::size_t lineno = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++lineno;
        auto line = text::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '[') {
            auto close = line.find(']');
            if (close == std::string_view::npos) throw ParseError(source, lineno, "unterminated section header");
            auto name = text::trim(line.substr(1, close - 1));
            auto rest = text::trim(line.substr(close + 1));
            if (name.empty() || (!rest.empty() && rest.front() != '#'))
                throw ParseError(source, lineno, "malformed section header");
            for (char c : name)
                if (!bare_key_char(c)) throw ParseError(source, lineno, "invalid section name");
            section = std::string(name);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(source, lineno, "expected key = value");
        auto key = text::trim(line.substr(0, eq));
        if (key.empty()) throw ParseError(source, lineno, "empty key");
        for (char c : key)
            if (!bare_key_char(c)) throw ParseError(source, lineno, "invalid key '" + std::string(key) + "'");
        auto value = decode_value(line.substr(eq + 1));
        if (!value) throw ParseError(source, lineno, "malformed value for '" + std::string(key) + "'");
        std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
        if (kv.values_.count(full)) throw ParseError(source, lineno, "duplicate key '" + full + "'");
        kv.values_[full] = *value;
        kv.lines_[full] = lineno;
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError(file.string(), 0, "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), file.string());
}

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValueFile::get_or(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

void KeyValueFile::bad_value(const std::string& key, const char* expected) const {
    auto it = lines_.find(key);
    throw ParseError(source_, it == lines_.end() ? 0 : it->second, "'" + key + "' must be " + expected);
}

std::optional<double> KeyValueFile::get_double(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    try {
        std::size_t used = 0;
        double d = std::stod(*v, &used);
        if (used != v->size()) bad_value(key, "a number");
        return d;
    } catch (const std::logic_error&) {
        bad_value(key, "a number");
    }
}

std::optional<long long> KeyValueFile::get_int(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || ptr != v->data() + v->size()) bad_value(key, "an integer");
    return out;
}

std::optional<bool> KeyValueFile::get_bool(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    if (*v == "true") return true;
    if (*v == "false") return false;
    bad_value(key, "true or false");
}

void Config::validate() const {
    auto check = [](const ProviderSpec& p, const char* role, std::initializer_list<const char*> kinds) {
        for (const char* k : kinds)
            if (p.kind == k) {
                if (p.kind == "http" && p.base_url.empty())
                    throw ValidationError(std::string(role) + ": http provider needs base_url");
                return;
            }
        throw ValidationError(std::string(role) + ": unsupported provider kind '" + p.kind + "'");
    };
    check(generator, "generator", {"mock", "http"});
    check(judge, "judge", {"mock", "http"});
    check(embedder, "embedder", {"none", "hashing", "http"});
    check(reranker, "reranker", {"none", "lexical", "identity", "http"});
    check(ce_classifier, "ce_classifier", {"none", "http"});
    check(ae_classifier, "ae_classifier", {"none", "http"});
    pair_align.validate();
    triplet_align.validate();
    retrieval.validate();
    if (retry.max_attempts < 1) throw ValidationError("retry.max_attempts must be at least 1");
    if (max_in_flight == 0) throw ValidationError("run.max_in_flight must be at least 1");
}

Config config_from(const KeyValueFile& kv) {
    for (const auto& [key, _] : kv.values())
        if (!known_keys().count(key)) throw ValidationError("unknown config key '" + key + "'");

    Config c;
    auto provider = [&](ProviderSpec& p, const std::string& role) {
        p.kind = kv.get_or(role + ".kind", p.kind);
        p.base_url = kv.get_or(role + ".base_url", p.base_url);
        p.model = kv.get_or(role + ".model", p.model);
        std::string upper;
        for (char ch : role) upper += static_cast<char>(ch >= 'a' && ch <= 'z' ? ch - 'a' + 'A' : ch);
        p.api_key_env = kv.get_or(role + ".api_key_env", "RESPKIT_API_KEY_" + upper);
        if (auto v = kv.get_double(role + ".timeout_s")) p.timeout_s = *v;
        if (auto v = kv.get_double(role + ".temperature")) p.temperature = *v;
        if (auto v = kv.get_int(role + ".dim")) {
            if (*v <= 0) throw ValidationError(role + ".dim must be positive");
            p.dim = static_cast<std::size_t>(*v);
        }
    };
    provider(c.generator, "generator");
    provider(c.judge, "judge");
    provider(c.embedder, "embedder");
    provider(c.reranker, "reranker");
    provider(c.ce_classifier, "ce_classifier");
    provider(c.ae_classifier, "ae_classifier");

    auto count = [&](const std::string& key, std::size_t& out) {
        if (auto v = kv.get_int(key)) {
            if (*v < 0) throw ValidationError(key + " must not be negative");
            out = static_cast<std::size_t>(*v);
        }
    };
    auto real = [&](const std::string& key, double& out) {
        if (auto v = kv.get_double(key)) out = *v;
    };
    real("pair_align.t0_embed", c.pair_align.t0_embed);
    real("pair_align.t1_fuzzy", c.pair_align.t1_fuzzy);
    count("pair_align.min_segment_sentences", c.pair_align.min_segment_sentences);
    count("pair_align.max_segment_sentences", c.pair_align.max_segment_sentences);
    count("pair_align.threads", c.pair_align.threads);
    real("triplet_align.fuzzy_min", c.triplet_align.fuzzy_min);
    real("triplet_align.embed_min", c.triplet_align.embed_min);
    real("triplet_align.bigram_min", c.triplet_align.bigram_min);
    if (auto v = kv.get_bool("triplet_align.classifier_enabled")) c.triplet_align.classifier_enabled = *v;
    count("triplet_align.max_in_flight", c.triplet_align.max_in_flight);
    count("retrieval.k_final", c.retrieval.k_final);
    real("retrieval.rrf_k", c.retrieval.rrf_k);
    real("retrieval.bm25_k1", c.retrieval.bm25_k1);
    real("retrieval.bm25_b", c.retrieval.bm25_b);
    count("retrieval.candidate_pool", c.retrieval.candidate_pool);
    if (auto v = kv.get_int("retry.max_attempts")) c.retry.max_attempts = static_cast<int>(*v);
    if (auto v = kv.get_int("retry.backoff_ms")) c.retry.backoff_ms = static_cast<int>(*v);
    count("run.max_in_flight", c.max_in_flight);
    c.audit_log = kv.get_or("run.audit_log", c.audit_log);
    c.validate();
    return c;
}

Config load_config(const std::filesystem::path& file) { return config_from(KeyValueFile::load(file)); }

}  // namespace respkit::service
