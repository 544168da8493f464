#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "respkit/align/pair_align.hpp"
#include "respkit/align/triplet_align.hpp"
#include "respkit/providers/audit.hpp"
#include "respkit/retrieval/retrieval.hpp"

namespace respkit::service {

/// Flat "section.key" -> value table read from a TOML-style file:
///   # comment
///   [section]
///   key = "string" | 12 | 0.5 | true
/// Values keep their decoded string form; typed access converts on read.
class KeyValueFile {
public:
    static KeyValueFile parse(std::string_view text, const std::string& source = "<config>");
    static KeyValueFile load(const std::filesystem::path& file);

    std::optional<std::string> get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    /// Throw ParseError naming the key when the value does not convert.
    std::optional<double> get_double(const std::string& key) const;
    std::optional<long long> get_int(const std::string& key) const;
    std::optional<bool> get_bool(const std::string& key) const;

    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, std::size_t> lines_;
    std::string source_;

    [[noreturn]] void bad_value(const std::string& key, const char* expected) const;
};

/// How one provider role is served.
///   none      role disabled
///   mock      offline MockChatProvider (chat roles only)
///   hashing   HashingEmbedder (embedder only)
///   lexical   LexicalReranker, identity  IdentityReranker (reranker only)
///   http      remote endpoint
struct ProviderSpec {
    std::string kind = "none";
    std::string base_url;
    std::string model;
    /// Environment variable holding the API key; defaults to RESPKIT_API_KEY_<ROLE>.
    std::string api_key_env;
    double timeout_s = 60.0;
    std::optional<double> temperature;
    std::size_t dim = 512;

    static ProviderSpec of(std::string kind) {
        ProviderSpec p;
        p.kind = std::move(kind);
        return p;
    }
};

struct Config {
    ProviderSpec generator = ProviderSpec::of("mock");
    ProviderSpec judge = ProviderSpec::of("mock");
    ProviderSpec embedder = ProviderSpec::of("hashing");
    ProviderSpec reranker = ProviderSpec::of("lexical");
    ProviderSpec ce_classifier;
    ProviderSpec ae_classifier;

    align::MatchConfig pair_align;
    align::TripletConfig triplet_align;
    retrieval::RetrievalConfig retrieval;
    providers::RetryPolicy retry;

    std::size_t max_in_flight = 4;
    std::string audit_log;  ///< empty keeps audit records in memory

    /// Throws ValidationError for unknown provider kinds or out-of-range thresholds.
    void validate() const;
};

/// Defaults overlaid with the file's values. Unknown keys are rejected.
Config config_from(const KeyValueFile& kv);
Config load_config(const std::filesystem::path& file);

}  // namespace respkit::service
