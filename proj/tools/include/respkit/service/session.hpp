#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "respkit/error.hpp"
#include "respkit/eval/evaluate.hpp"
#include "respkit/gen/engine.hpp"
#include "respkit/service/factory.hpp"

namespace respkit::service {

class NotFound : public Error {
public:
    using Error::Error;
};

/// The requested operation is not valid in the session's current state.
class Conflict : public Error {
public:
    using Error::Error;
};

enum class SessionStatus { Idle, Generating, Evaluating, Error };

std::string_view to_string(SessionStatus s);

struct Draft {
    gen::GenerationRequest request;
    gen::GenerationResult result;
    std::optional<eval::EvalReport> report;
};

struct Session {
    std::string session_id;
    std::string review_segment;
    std::vector<gen::AuthorEdit> author_edits;
    std::optional<std::vector<std::string>> v1_paragraphs;
    std::optional<corpus::ResponsePlan> plan;
    std::optional<std::vector<corpus::ReviewItem>> review_items;
    std::optional<std::size_t> length_limit;
    corpus::Venue venue = corpus::Venue::Journal;
    std::vector<Draft> drafts;
    SessionStatus status = SessionStatus::Idle;
    std::string last_error;
};

nlohmann::json to_json(const Session& s);

/// Applies one logged event to a session. The live path and the replay path both go
/// through here, so a replayed session equals the one that wrote the log.
///   {"event": "create" | "inputs", review_segment?, author_edits?, v1_paragraphs?, venue?}
///   {"event": "plan", plan?, length_limit?, review_items?}
///   {"event": "draft", request, result}
///   {"event": "evaluation", draft, report}
///   {"event": "error", message}
void apply_event(Session& s, const nlohmann::json& event);

/// Sessions kept in memory and persisted as one append-only JSONL file per session.
/// Opening a directory replays every log in it.
class SessionStore {
public:
    /// Without a directory nothing is persisted.
    explicit SessionStore(std::optional<std::filesystem::path> dir = std::nullopt);

    /// Creates a session from a "create" event and returns its id.
    std::string create(nlohmann::json event);
    /// Applies and persists the event. Throws NotFound.
    void append(const std::string& id, const nlohmann::json& event);
    /// Copy of the current state. Throws NotFound.
    Session get(const std::string& id) const;
    bool contains(const std::string& id) const;
    std::vector<std::string> ids() const;
    /// In-memory status change; never persisted.
    void set_status(const std::string& id, SessionStatus status);

private:
    std::optional<std::filesystem::path> dir_;
    mutable std::mutex mutex_;
    std::map<std::string, Session> sessions_;

    void persist(const std::string& id, const nlohmann::json& event);
    std::string fresh_id();
};

/// Session operations behind the HTTP API. One operation runs per session at a time;
/// a second concurrent one is rejected with Conflict.
class SessionService {
public:
    SessionService(std::shared_ptr<SessionStore> store, ProviderSet providers);

    nlohmann::json create(const nlohmann::json& body);
    nlohmann::json get(const std::string& id) const;
    nlohmann::json list() const;
    nlohmann::json put_inputs(const std::string& id, const nlohmann::json& body);
    /// Body: {plan?, length_limit?, review_items?}; null clears a field.
    nlohmann::json put_plan(const std::string& id, const nlohmann::json& body);
    /// Itemizes the review with the judge and stores the items.
    nlohmann::json annotate(const std::string& id);
    /// Body: {"setting": "S1".."S7"}. Appends one draft.
    nlohmann::json generate(const std::string& id, const nlohmann::json& body);
    /// Body: {"draft": index?}; defaults to the latest draft.
    nlohmann::json evaluate(const std::string& id, const nlohmann::json& body);
    /// Body: {"rounds": 1..5?, "setting": "S8" | "S9"?}. Evaluates the latest draft when needed,
    /// then appends its refinement. Without a setting, S6 drafts refine under S8 and S7 under S9.
    nlohmann::json refine(const std::string& id, const nlohmann::json& body);

    /// Builds the request the session would send for `setting`. Throws RequestValidationError.
    gen::GenerationRequest request_for(const Session& s, gen::Setting setting) const;

    SessionStore& store() { return *store_; }

private:
    class Busy;

    std::shared_ptr<SessionStore> store_;
    ProviderSet providers_;
    mutable std::mutex busy_mutex_;
    std::set<std::string> busy_;

    eval::EvalReport run_evaluation(const std::string& id, const Session& s, std::size_t draft);
    template <class Fn>
    nlohmann::json exclusive(const std::string& id, SessionStatus status, Fn&& fn);
};

}  // namespace respkit::service
