#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "respkit/corpus/taxonomy.hpp"
#include "respkit/providers/provider.hpp"

namespace respkit::providers {

/// Offline chat provider that answers from the structured request payload.
///
/// Each task has a deterministic default handler:
///   generate / refine   compose a response from the edits and plan in the payload
///   annotate            itemize the review and label response sentences
///   quality             rubric scores from lexical overlap with the review
///   extract_facts       one fact per non-social sentence
///   verify              token-coverage verdict per fact against the context
/// Handlers can be replaced per task. Failures can be injected for retry tests.
class MockChatProvider final : public ChatProvider {
public:
    using Handler = std::function<std::string(const ChatRequest&)>;

    MockChatProvider() = default;

    void set_handler(const std::string& task, Handler h);
    /// The next `n` calls fail with a ProviderError of the given retriability.
    void fail_next(int n, bool retriable = true);

    ChatResponse complete(const ChatRequest& request) override;
    std::string name() const override { return "mock"; }

    std::size_t calls() const { return calls_.load(); }
    std::size_t calls(const std::string& task) const;

private:
    mutable std::mutex mutex_;
    std::map<std::string, Handler> handlers_;
    std::map<std::string, std::size_t> per_task_;
    std::atomic<std::size_t> calls_{0};
    int fail_remaining_ = 0;
    bool fail_retriable_ = true;
};

/// Sentence opener the mock generator uses for an action; the mock annotator maps it back.
std::string_view mock_action_phrase(ResponseAction a);

namespace mock {
std::string generate(const ChatRequest& r);
std::string refine(const ChatRequest& r);
std::string annotate(const ChatRequest& r);
std::string quality(const ChatRequest& r);
std::string extract_facts(const ChatRequest& r);
std::string verify(const ChatRequest& r);
}  // namespace mock

}  // namespace respkit::providers
