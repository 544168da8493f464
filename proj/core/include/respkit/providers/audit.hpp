#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "respkit/providers/provider.hpp"

namespace respkit::providers {

/// Append-only log with one JSON object per provider call.
/// When constructed without a path, records are kept in memory only.
class AuditLog {
public:
    AuditLog() = default;
    explicit AuditLog(std::filesystem::path file);

    /// Writes `record` with a fresh "audit_id" and returns that id. Thread-safe.
    std::string append(nlohmann::json record);

    std::vector<nlohmann::json> records() const;
    std::size_t size() const;

private:
    std::string next_id();

    mutable std::mutex mutex_;
    std::filesystem::path file_;
    std::ofstream out_;
    std::vector<nlohmann::json> records_;
    std::string prefix_;
    std::size_t counter_ = 0;
};

struct RetryPolicy {
    int max_attempts = 3;
    int backoff_ms = 200;
};

/// Decorates a chat provider with retries and one audit record per logical call.
/// A failed call is logged once with its attempt count and rethrown as ProviderError
/// carrying the audit id.
class AuditedChatProvider final : public ChatProvider {
public:
    AuditedChatProvider(std::shared_ptr<ChatProvider> inner, std::shared_ptr<AuditLog> log, RetryPolicy retry = {});

    ChatResponse complete(const ChatRequest& request) override;
    std::string name() const override { return inner_->name(); }

private:
    std::shared_ptr<ChatProvider> inner_;
    std::shared_ptr<AuditLog> log_;
    RetryPolicy retry_;
};

}  // namespace respkit::providers
