#include "respkit/service/session.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>

#include "respkit/corpus/io.hpp"
#include "respkit/eval/discourse.hpp"
#include "respkit/util/text.hpp"

namespace respkit::service {

using nlohmann::json;

std::string_view to_string(SessionStatus s) {
    switch (s) {
        case SessionStatus::Idle: return "idle";
        case SessionStatus::Generating: return "generating";
        case SessionStatus::Evaluating: return "evaluating";
        case SessionStatus::Error: return "error";
    }
    return "idle";
}

namespace {

json edit_to_json(const gen::AuthorEdit& e) {
    json j = {{"text", e.text}};
    j["paragraph"] = e.paragraph ? json(*e.paragraph) : json(nullptr);
    j["section"] = e.section ? json(*e.section) : json(nullptr);
    return j;
}

gen::AuthorEdit edit_from_json(const json& j) {
    gen::AuthorEdit e;
    if (j.is_string()) {
        e.text = j.get<std::string>();
    } else if (j.is_object() && j.contains("text") && j["text"].is_string()) {
        e.text = j["text"].get<std::string>();
        for (const char* key : {"paragraph", "section"}) {
            if (!j.contains(key) || j[key].is_null()) continue;
            if (!j[key].is_string()) throw RequestValidationError("author_edits", std::string("edit ") + key + " must be a string");
            (std::string_view(key) == "paragraph" ? e.paragraph : e.section) = j[key].get<std::string>();
        }
    } else {
        throw RequestValidationError("author_edits", "each edit must be a string or an object with 'text'");
    }
    if (text::trim(e.text).empty()) throw RequestValidationError("author_edits", "edit text must not be empty");
    return e;
}

std::vector<std::string> string_list(const json& j, const char* field) {
    if (!j.is_array()) throw RequestValidationError(field, std::string(field) + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& v : j) {
        if (!v.is_string()) throw RequestValidationError(field, std::string(field) + " must be an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

template <class Fn>
void field(const char* name, Fn&& fn) {
    try {
        fn();
    } catch (const RequestValidationError&) {
        throw;
    } catch (const std::exception& e) {
        throw RequestValidationError(name, std::string(name) + ": " + e.what());
    }
}

void apply_inputs(Session& s, const json& e) {
    if (e.contains("review_segment")) {
        if (!e["review_segment"].is_string()) throw RequestValidationError("review_segment", "review_segment must be a string");
        s.review_segment = e["review_segment"].get<std::string>();
    }
    if (e.contains("author_edits")) {
        if (!e["author_edits"].is_array()) throw RequestValidationError("author_edits", "author_edits must be an array");
        std::vector<gen::AuthorEdit> edits;
        for (const auto& x : e["author_edits"]) edits.push_back(edit_from_json(x));
        s.author_edits = std::move(edits);
    }
    if (e.contains("v1_paragraphs")) {
        if (e["v1_paragraphs"].is_null()) s.v1_paragraphs.reset();
        else s.v1_paragraphs = string_list(e["v1_paragraphs"], "v1_paragraphs");
    }
    if (e.contains("venue")) {
        auto v = e["venue"].is_string() ? corpus::parse_venue(e["venue"].get<std::string>()) : std::nullopt;
        if (!v) throw RequestValidationError("venue", "venue must be 'conference' or 'journal'");
        s.venue = *v;
    }
}

void apply_plan(Session& s, const json& e) {
    if (e.contains("plan")) {
        if (e["plan"].is_null()) s.plan.reset();
        else field("plan", [&] { s.plan = corpus::plan_from_json(e["plan"]); });
    }
    if (e.contains("review_items")) {
        if (e["review_items"].is_null()) {
            s.review_items.reset();
        } else {
            field("review_items", [&] {
                if (!e["review_items"].is_array()) throw ValidationError("must be an array");
                std::vector<corpus::ReviewItem> items;
                std::set<std::string> seen;
                for (const auto& x : e["review_items"]) {
                    items.push_back(corpus::review_item_from_json(x));
                    if (!seen.insert(items.back().item_id).second)
                        throw ValidationError("duplicate item id '" + items.back().item_id + "'");
                }
                s.review_items = std::move(items);
            });
        }
    }
    if (e.contains("length_limit")) {
        const auto& v = e["length_limit"];
        if (v.is_null()) s.length_limit.reset();
        else if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0))
            s.length_limit = v.get<std::size_t>();
        else throw RequestValidationError("length_limit", "length_limit must be a non-negative integer");
    }
}

}  // namespace

json to_json(const Session& s) {
    json j;
    j["session_id"] = s.session_id;
    j["review_segment"] = s.review_segment;
    j["author_edits"] = json::array();
    for (const auto& e : s.author_edits) j["author_edits"].push_back(edit_to_json(e));
    j["v1_paragraphs"] = s.v1_paragraphs ? json(*s.v1_paragraphs) : json(nullptr);
    j["plan"] = s.plan ? corpus::to_json(*s.plan) : json(nullptr);
    if (s.review_items) {
        j["review_items"] = json::array();
        for (const auto& it : *s.review_items) j["review_items"].push_back(corpus::to_json(it));
    } else {
        j["review_items"] = nullptr;
    }
    j["length_limit"] = s.length_limit ? json(*s.length_limit) : json(nullptr);
    j["venue"] = std::string(corpus::to_string(s.venue));
    j["status"] = std::string(to_string(s.status));
    j["last_error"] = s.last_error.empty() ? json(nullptr) : json(s.last_error);
    j["drafts"] = json::array();
    for (std::size_t i = 0; i < s.drafts.size(); ++i) {
        const auto& d = s.drafts[i];
        j["drafts"].push_back({{"index", i},
                               {"setting", gen::to_string(d.result.setting)},
                               {"request", gen::to_json(d.request)},
                               {"result", gen::to_json(d.result)},
                               {"report", d.report ? eval::to_json(*d.report) : json(nullptr)}});
    }
    return j;
}

void apply_event(Session& s, const json& e) {
    if (!e.is_object() || !e.contains("event") || !e["event"].is_string())
        throw ValidationError("session event without an 'event' name");
    const auto name = e["event"].get<std::string>();
    if (name == "create") {
        if (!e.contains("session_id") || !e["session_id"].is_string()) throw ValidationError("create event without session_id");
        s = Session{};
        s.session_id = e["session_id"].get<std::string>();
        apply_inputs(s, e);
        apply_plan(s, e);
    } else if (name == "inputs") {
        apply_inputs(s, e);
    } else if (name == "plan") {
        apply_plan(s, e);
    } else if (name == "draft") {
        Draft d;
        d.request = gen::request_from_json(e.at("request"));
        d.result = gen::result_from_json(e.at("result"));
        s.drafts.push_back(std::move(d));
        s.status = SessionStatus::Idle;
        s.last_error.clear();
    } else if (name == "evaluation") {
        auto idx = e.at("draft").get<std::size_t>();
        if (idx >= s.drafts.size()) throw ValidationError("evaluation for unknown draft " + std::to_string(idx));
        s.drafts[idx].report = eval::report_from_json(e.at("report"));
        s.status = SessionStatus::Idle;
        s.last_error.clear();
    } else if (name == "error") {
        s.status = SessionStatus::Error;
        s.last_error = e.value("message", std::string("error"));
    } else {
        throw ValidationError("unknown session event '" + name + "'");
    }
}

SessionStore::SessionStore(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {
    if (!dir_) return;
    std::filesystem::create_directories(*dir_);
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(*dir_))
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        std::ifstream in(f);
        std::vector<std::string> lines;
        for (std::string line; std::getline(in, line);)
            if (!text::trim(line).empty()) lines.push_back(line);
        Session s;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            json e = json::parse(lines[i], nullptr, false);
            // A torn final line is an uncommitted write.
            if (e.is_discarded()) {
                if (i + 1 == lines.size()) break;
                throw ParseError(f.string(), i + 1, "malformed session event");
            }
            apply_event(s, e);
        }
        if (!s.session_id.empty()) sessions_[s.session_id] = std::move(s);
    }
}

std::string SessionStore::fresh_id() {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    for (;;) {
        char buf[24];
        std::snprintf(buf, sizeof buf, "s%016llx", static_cast<unsigned long long>(rng()));
        if (!sessions_.count(buf)) return buf;
    }
}

void SessionStore::persist(const std::string& id, const json& event) {
    if (!dir_) return;
    std::ofstream out(*dir_ / (id + ".jsonl"), std::ios::app);
    out << event.dump() << '\n';
    out.flush();
    if (!out) throw Error("cannot persist session '" + id + "'");
}

std::string SessionStore::create(json event) {
    std::lock_guard lock(mutex_);
    std::string id = fresh_id();
    event["event"] = "create";
    event["session_id"] = id;
    Session s;
    apply_event(s, event);
    persist(id, event);
    sessions_[id] = std::move(s);
    return id;
}

void SessionStore::append(const std::string& id, const json& event) {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw NotFound("unknown session '" + id + "'");
    Session next = it->second;
    apply_event(next, event);
    persist(id, event);
    it->second = std::move(next);
}

Session SessionStore::get(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw NotFound("unknown session '" + id + "'");
    return it->second;
}

bool SessionStore::contains(const std::string& id) const {
    std::lock_guard lock(mutex_);
    return sessions_.count(id) > 0;
}

std::vector<std::string> SessionStore::ids() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [id, _] : sessions_) out.push_back(id);
    return out;
}

void SessionStore::set_status(const std::string& id, SessionStatus status) {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it != sessions_.end()) it->second.status = status;
}

// ---- service ----

class SessionService::Busy {
public:
    Busy(SessionService& svc, std::string id) : svc_(svc), id_(std::move(id)) {
        std::lock_guard lock(svc_.busy_mutex_);
        if (!svc_.busy_.insert(id_).second) throw Conflict("another operation is running on session '" + id_ + "'");
    }
    ~Busy() {
        std::lock_guard lock(svc_.busy_mutex_);
        svc_.busy_.erase(id_);
    }
    Busy(const Busy&) = delete;
    Busy& operator=(const Busy&) = delete;

private:
    SessionService& svc_;
    std::string id_;
};

SessionService::SessionService(std::shared_ptr<SessionStore> store, ProviderSet providers)
    : store_(std::move(store)), providers_(std::move(providers)) {}

template <class Fn>
json SessionService::exclusive(const std::string& id, SessionStatus status, Fn&& fn) {
    auto before = store_->get(id).status;
    Busy busy(*this, id);
    store_->set_status(id, status);
    try {
        json out = fn();
        store_->set_status(id, SessionStatus::Idle);
        return out;
    } catch (const ProviderError& e) {
        store_->append(id, {{"event", "error"}, {"message", e.what()}, {"audit_id", e.audit_id()}});
        throw;
    } catch (...) {
        store_->set_status(id, before);
        throw;
    }
}

json SessionService::create(const json& body) {
    if (!body.is_object()) throw RequestValidationError("body", "request body must be a JSON object");
    json event = json::object();
    for (const char* key : {"review_segment", "author_edits", "v1_paragraphs", "venue", "plan", "length_limit", "review_items"})
        if (body.contains(key)) event[key] = body[key];
    return to_json(store_->get(store_->create(std::move(event))));
}

json SessionService::get(const std::string& id) const { return to_json(store_->get(id)); }

json SessionService::list() const {
    json out = json::array();
    for (const auto& id : store_->ids()) out.push_back(id);
    return {{"sessions", out}};
}

json SessionService::put_inputs(const std::string& id, const json& body) {
    if (!body.is_object()) throw RequestValidationError("body", "request body must be a JSON object");
    json event = {{"event", "inputs"}};
    for (const char* key : {"review_segment", "author_edits", "v1_paragraphs", "venue"})
        if (body.contains(key)) event[key] = body[key];
    return exclusive(id, store_->get(id).status, [&] {
        store_->append(id, event);
        return get(id);
    });
}

json SessionService::put_plan(const std::string& id, const json& body) {
    if (!body.is_object()) throw RequestValidationError("body", "request body must be a JSON object");
    json event = {{"event", "plan"}};
    for (const char* key : {"plan", "length_limit", "review_items"})
        if (body.contains(key)) event[key] = body[key];
    return exclusive(id, store_->get(id).status, [&] {
        store_->append(id, event);
        return get(id);
    });
}

json SessionService::annotate(const std::string& id) {
    return exclusive(id, SessionStatus::Evaluating, [&] {
        auto s = store_->get(id);
        if (text::trim(s.review_segment).empty()) throw RequestValidationError("review_segment", "review_segment is empty");
        if (!providers_.judge) throw Conflict("no judge provider configured");
        auto a = eval::annotate_response(s.review_segment, "", *providers_.judge);
        json items = json::array();
        for (const auto& it : a.items) items.push_back(corpus::to_json(it));
        store_->append(id, {{"event", "plan"}, {"review_items", items}});
        return json{{"review_items", items}};
    });
}

gen::GenerationRequest SessionService::request_for(const Session& s, gen::Setting setting) const {
    gen::GenerationRequest req;
    req.setting = setting;
    req.pair_id = s.session_id;
    req.review_segment = s.review_segment;
    if (gen::needs_edits(setting)) req.author_edits = s.author_edits;
    if (gen::needs_v1(setting)) req.v1_paragraphs = s.v1_paragraphs;
    if (gen::needs_limit(setting)) req.length_limit = s.length_limit;
    if (gen::needs_plan(setting)) {
        req.plan = s.plan;
        req.review_items = s.review_items;
    }
    req.venue_mode = s.venue;
    return req;
}

json SessionService::generate(const std::string& id, const json& body) {
    if (!body.is_object() || !body.contains("setting") || !body["setting"].is_string())
        throw RequestValidationError("setting", "body needs a 'setting' such as \"S2\"");
    auto setting = gen::parse_setting(body["setting"].get<std::string>());
    if (!setting) throw RequestValidationError("setting", "unknown setting '" + body["setting"].get<std::string>() + "'");
    if (gen::is_refinement(*setting))
        throw RequestValidationError("setting", "refinement settings run through the refine endpoint");
    store_->get(id);  // NotFound before Conflict
    return exclusive(id, SessionStatus::Generating, [&] {
        auto s = store_->get(id);
        auto req = request_for(s, *setting);
        gen::validate(req);
        if (!providers_.generator) throw Conflict("no generation provider configured");
        auto res = gen::generate(req, *providers_.generator);
        store_->append(id, {{"event", "draft"}, {"request", gen::to_json(req)}, {"result", gen::to_json(res)}});
        return json{{"draft", s.drafts.size()}, {"result", gen::to_json(res)}};
    });
}

eval::EvalReport SessionService::run_evaluation(const std::string& id, const Session& s, std::size_t draft) {
    if (!providers_.judge) throw Conflict("no judge provider configured");
    const auto& d = s.drafts.at(draft);
    store_->set_status(id, SessionStatus::Evaluating);
    auto ev = eval::evaluate(d.request, d.result, providers_.judges());
    store_->append(id, {{"event", "evaluation"}, {"draft", draft}, {"report", eval::to_json(ev.report)}});
    return ev.report;
}

json SessionService::evaluate(const std::string& id, const json& body) {
    store_->get(id);
    return exclusive(id, SessionStatus::Evaluating, [&] {
        auto s = store_->get(id);
        if (s.drafts.empty()) throw Conflict("session has no draft to evaluate");
        std::size_t idx = s.drafts.size() - 1;
        if (body.is_object() && body.contains("draft") && !body["draft"].is_null()) {
            if (!body["draft"].is_number_unsigned()) throw RequestValidationError("draft", "draft must be an index");
            idx = body["draft"].get<std::size_t>();
            if (idx >= s.drafts.size()) throw NotFound("unknown draft " + std::to_string(idx));
        }
        auto report = run_evaluation(id, s, idx);
        return json{{"draft", idx}, {"report", eval::to_json(report)}};
    });
}

json SessionService::refine(const std::string& id, const json& body) {
    int rounds = 1;
    if (body.is_object() && body.contains("rounds")) {
        if (!body["rounds"].is_number_integer() || body["rounds"].get<int>() < 1 || body["rounds"].get<int>() > 5)
            throw RequestValidationError("rounds", "rounds must be an integer in 1..5");
        rounds = body["rounds"].get<int>();
    }
    std::optional<gen::Setting> requested;
    if (body.is_object() && body.contains("setting") && !body["setting"].is_null()) {
        requested = body["setting"].is_string() ? gen::parse_setting(body["setting"].get<std::string>()) : std::nullopt;
        if (!requested || !gen::is_refinement(*requested))
            throw RequestValidationError("setting", "refinement setting must be S8 or S9");
    }
    store_->get(id);
    return exclusive(id, SessionStatus::Generating, [&] {
        auto s = store_->get(id);
        if (s.drafts.empty()) throw Conflict("session has no draft to refine");
        gen::Setting target = gen::Setting::S8;
        try {
            target = requested ? *requested : gen::refinement_setting(s.drafts.back().result.setting);
        } catch (const RequestValidationError& e) {
            throw Conflict(e.what());
        }
        if (!providers_.generator) throw Conflict("no generation provider configured");
        json produced = json::array();
        bool fixed_point = false;
        for (int k = 0; k < rounds && !fixed_point; ++k) {
            s = store_->get(id);
            std::size_t last = s.drafts.size() - 1;
            auto report = s.drafts[last].report ? *s.drafts[last].report : run_evaluation(id, s, last);
            auto req = request_for(s, target);
            req.prior_draft = s.drafts[last].result.response_text;
            req.prior_eval = report;
            gen::validate(req);
            store_->set_status(id, SessionStatus::Generating);
            auto res = gen::generate(req, *providers_.generator);
            fixed_point = res.response_text == s.drafts[last].result.response_text;
            store_->append(id, {{"event", "draft"}, {"request", gen::to_json(req)}, {"result", gen::to_json(res)}});
            produced.push_back({{"draft", last + 1}, {"result", gen::to_json(res)}});
        }
        return json{{"drafts", produced}, {"fixed_point", fixed_point}};
    });
}

}  // namespace respkit::service
