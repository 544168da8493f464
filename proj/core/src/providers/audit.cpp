#include "respkit/providers/audit.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <thread>

#include "respkit/error.hpp"

namespace respkit::providers {

using nlohmann::json;

namespace {

std::string now_iso() {
    auto now = std::chrono::system_clock::now();
    auto t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json messages_json(const std::vector<ChatMessage>& msgs) {
    json arr = json::array();
    for (const auto& m : msgs) arr.push_back({{"role", m.role}, {"content", m.content}});
    return arr;
}

}  // namespace

AuditLog::AuditLog(std::filesystem::path file) : file_(std::move(file)) {
    if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
    out_.open(file_, std::ios::app);
    if (!out_) throw ValidationError("cannot open audit log '" + file_.string() + "'");
    // Ids stay unique across restarts that append to the same file.
    prefix_ = std::to_string(std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::system_clock::now().time_since_epoch())
                                 .count()) +
              "-";
}

std::string AuditLog::next_id() { return "a" + prefix_ + std::to_string(++counter_); }

std::string AuditLog::append(json record) {
    std::lock_guard lock(mutex_);
    std::string id = next_id();
    record["audit_id"] = id;
    if (!record.contains("time")) record["time"] = now_iso();
    if (out_.is_open()) {
        out_ << record.dump() << '\n';
        out_.flush();
    }
    records_.push_back(std::move(record));
    return id;
}

std::vector<json> AuditLog::records() const {
    std::lock_guard lock(mutex_);
    return records_;
}

std::size_t AuditLog::size() const {
    std::lock_guard lock(mutex_);
    return records_.size();
}

AuditedChatProvider::AuditedChatProvider(std::shared_ptr<ChatProvider> inner, std::shared_ptr<AuditLog> log,
                                         RetryPolicy retry)
    : inner_(std::move(inner)), log_(std::move(log)), retry_(retry) {}

ChatResponse AuditedChatProvider::complete(const ChatRequest& request) {
    json record{{"provider", inner_->name()},
                {"task", request.task},
                {"messages", messages_json(request.messages)},
                {"payload", request.payload}};
    if (request.temperature) record["temperature"] = *request.temperature;

    int attempts = 0;
    int max_attempts = std::max(1, retry_.max_attempts);
    while (true) {
        ++attempts;
        try {
            ChatResponse resp = inner_->complete(request);
            record["attempts"] = attempts;
            record["status"] = "ok";
            record["response"] = resp.text;
            resp.attempts = attempts;
            resp.audit_id = log_ ? log_->append(record) : std::string{};
            return resp;
        } catch (const ProtocolError& e) {
            record["attempts"] = attempts;
            record["status"] = "protocol_error";
            record["error"] = e.what();
            ProtocolError err(e.what());
            if (log_) err.set_audit_id(log_->append(record));
            throw err;
        } catch (const ProviderError& e) {
            if (e.retriable() && attempts < max_attempts) {
                std::this_thread::sleep_for(std::chrono::milliseconds(retry_.backoff_ms * attempts));
                continue;
            }
            record["attempts"] = attempts;
            record["status"] = "error";
            record["error"] = e.what();
            ProviderError err(std::string(e.what()) + " (after " + std::to_string(attempts) + " attempt" +
                                  (attempts == 1 ? "" : "s") + ")",
                              e.retriable(), attempts);
            if (log_) err.set_audit_id(log_->append(record));
            throw err;
        }
    }
}

}  // namespace respkit::providers
