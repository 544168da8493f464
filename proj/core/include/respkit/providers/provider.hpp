#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace respkit::providers {

using Vector = std::vector<float>;

/// Text embedding provider: one fixed-dimension vector per input text.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::vector<Vector> embed(std::span<const std::string> texts) = 0;
    virtual std::string name() const = 0;
};

double cosine(const Vector& a, const Vector& b);

/// Cosine similarity mapped to [0, 100] as 100 * max(0, cos).
double similarity_0_100(const Vector& a, const Vector& b);

/// Convenience: embeds both texts in one call and returns similarity_0_100.
double semantic_similarity(Embedder& embedder, const std::string& a, const std::string& b);

struct ClassifierVerdict {
    bool positive = false;
    double score = 0.0;
};

/// Binary text-pair scorer.
class PairClassifier {
public:
    virtual ~PairClassifier() = default;
    virtual ClassifierVerdict classify(std::string_view text_a, std::string_view text_b) = 0;
};

/// Cross-scoring reranker: one relevance score per passage.
class Reranker {
public:
    virtual ~Reranker() = default;
    virtual std::vector<double> score(std::string_view query, std::span<const std::string> passages) = 0;
};

struct ChatMessage {
    std::string role;
    std::string content;
};

struct ChatRequest {
    /// Logical task tag, e.g. "generate", "quality". Logged; never sent to the endpoint.
    std::string task;
    std::vector<ChatMessage> messages;
    std::optional<double> temperature;
    /// Structured task inputs. Logged for audit and used by offline providers.
    nlohmann::json payload = nlohmann::json::object();
};

struct ChatResponse {
    std::string text;
    std::string audit_id;
    int attempts = 1;
};

/// Chat-completion style provider used for generation and for every judge task.
class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
    virtual std::string name() const = 0;
};

}  // namespace respkit::providers
