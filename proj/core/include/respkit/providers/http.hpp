#pragma once

#include <memory>
#include <optional>
#include <string>

#include "respkit/providers/provider.hpp"

namespace respkit::providers {

/// Connection settings for one remote provider. Credentials are read from the named
/// environment variable at call time and never stored.
struct HttpEndpoint {
    std::string base_url;
    std::string model;
    std::string api_key_env;
    double timeout_s = 60.0;
    std::optional<double> temperature;
};

struct ParsedUrl {
    std::string origin;  ///< scheme://host[:port]
    std::string path;    ///< path prefix without trailing slash, may be empty
};

/// Splits "https://host:port/v1" into origin and path. Throws ValidationError.
ParsedUrl parse_url(const std::string& url);

/// POSTs JSON to base_url + path and returns the decoded JSON body.
/// Transport failures and 5xx/429 answers raise retriable ProviderError; other non-2xx
/// answers raise non-retriable ProviderError; undecodable bodies raise ProtocolError.
nlohmann::json post_json(const HttpEndpoint& ep, const std::string& path, const nlohmann::json& body);

/// OpenAI-compatible chat completion: POST {base}/chat/completions.
class HttpChatProvider final : public ChatProvider {
public:
    explicit HttpChatProvider(HttpEndpoint ep) : ep_(std::move(ep)) {}
    ChatResponse complete(const ChatRequest& request) override;
    std::string name() const override { return "http:" + ep_.model; }

private:
    HttpEndpoint ep_;
};

/// OpenAI-compatible embeddings: POST {base}/embeddings with {model, input[]}.
class HttpEmbedder final : public Embedder {
public:
    explicit HttpEmbedder(HttpEndpoint ep) : ep_(std::move(ep)) {}
    std::vector<Vector> embed(std::span<const std::string> texts) override;
    std::string name() const override { return "http:" + ep_.model; }

private:
    HttpEndpoint ep_;
};

/// POST {base} with {text_a, text_b}; answer {label: "positive"|"negative", score}.
class HttpPairClassifier final : public PairClassifier {
public:
    explicit HttpPairClassifier(HttpEndpoint ep) : ep_(std::move(ep)) {}
    ClassifierVerdict classify(std::string_view a, std::string_view b) override;

private:
    HttpEndpoint ep_;
};

/// POST {base} with {query, passages[]}; answer {scores[]}.
class HttpReranker final : public Reranker {
public:
    explicit HttpReranker(HttpEndpoint ep) : ep_(std::move(ep)) {}
    std::vector<double> score(std::string_view query, std::span<const std::string> passages) override;

private:
    HttpEndpoint ep_;
};

/// Interprets a classifier answer. Throws ProtocolError for anything else.
ClassifierVerdict parse_classifier_answer(const nlohmann::json& j);
/// Extracts choices[0].message.content. Throws ProtocolError when it is not text.
std::string parse_chat_answer(const nlohmann::json& j);

}  // namespace respkit::providers
