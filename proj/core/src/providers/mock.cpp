#include "respkit/providers/mock.hpp"

#include <algorithm>
#include <set>

#include "respkit/corpus/segmenter.hpp"
#include "respkit/error.hpp"
#include "respkit/util/text.hpp"

namespace respkit::providers {

using nlohmann::json;

void MockChatProvider::set_handler(const std::string& task, Handler h) {
    std::lock_guard lock(mutex_);
    handlers_[task] = std::move(h);
}

void MockChatProvider::fail_next(int n, bool retriable) {
    std::lock_guard lock(mutex_);
    fail_remaining_ = n;
    fail_retriable_ = retriable;
}

std::size_t MockChatProvider::calls(const std::string& task) const {
    std::lock_guard lock(mutex_);
    auto it = per_task_.find(task);
    return it == per_task_.end() ? 0 : it->second;
}

ChatResponse MockChatProvider::complete(const ChatRequest& request) {
    Handler handler;
    {
        std::lock_guard lock(mutex_);
        ++calls_;
        ++per_task_[request.task];
        if (fail_remaining_ > 0) {
            --fail_remaining_;
            throw ProviderError("mock provider: injected failure", fail_retriable_);
        }
        if (auto it = handlers_.find(request.task); it != handlers_.end()) handler = it->second;
    }
    if (!handler) {
        static const std::map<std::string, Handler> defaults{
            {"generate", mock::generate},   {"refine", mock::refine},
            {"annotate", mock::annotate},   {"quality", mock::quality},
            {"extract_facts", mock::extract_facts}, {"verify", mock::verify},
        };
        auto it = defaults.find(request.task);
        if (it == defaults.end()) throw ProtocolError("mock provider: no handler for task '" + request.task + "'");
        handler = it->second;
    }
    return ChatResponse{handler(request), {}, 1};
}

std::string_view mock_action_phrase(ResponseAction a) {
    switch (a) {
        case ResponseAction::AnswerQuestion: return "To answer the question,";
        case ResponseAction::TaskHasBeenDone: return "We have already done this:";
        case ResponseAction::TaskWillBeDoneInNextVersion: return "In the final version we will add that";
        case ResponseAction::AcceptForFutureWork: return "We leave for future work that";
        case ResponseAction::ConcedeCriticism: return "We agree that";
        case ResponseAction::RefuteQuestion: return "The question does not apply because";
        case ResponseAction::RejectCriticism: return "We respectfully disagree, since";
        case ResponseAction::ContradictAssertion: return "Contrary to the statement,";
        case ResponseAction::RejectRequest: return "We cannot accommodate this request because";
        case ResponseAction::MitigateImportanceOfTheQuestion: return "This question is of minor importance as";
        case ResponseAction::MitigateCriticism: return "This limitation is minor because";
        case ResponseAction::Social: return "We thank the reviewer for";
        case ResponseAction::FollowUpQuestion: return "Could the reviewer clarify whether";
        case ResponseAction::Structure: return "Regarding the next point,";
        case ResponseAction::Summarize: return "In summary,";
        case ResponseAction::Other: return "Note that";
    }
    return "Note that";
}

namespace mock {

namespace {

std::vector<std::string> sentences_of(std::string_view text) {
    static const corpus::RuleBasedSegmenter seg;
    return seg.split(text);
}

std::string strip_final_period(std::string s) {
    while (!s.empty() && (s.back() == '.' || s.back() == ' ')) s.pop_back();
    return s;
}

std::string truncate_words(const std::string& text, const json& limit) {
    if (!limit.is_number_integer()) return text;
    auto n = limit.get<long long>();
    auto tokens = text::whitespace_tokens(text);
    if (n < 0 || tokens.size() <= static_cast<std::size_t>(n)) return text;
    std::string out;
    for (long long i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += tokens[static_cast<std::size_t>(i)];
    }
    return out;
}

std::vector<std::string> strings_at(const json& payload, const char* key) {
    std::vector<std::string> out;
    if (auto it = payload.find(key); it != payload.end() && it->is_array()) {
        for (const auto& v : *it)
            if (v.is_string()) out.push_back(v.get<std::string>());
    }
    return out;
}

std::set<std::string> content_tokens(std::string_view s) {
    static const std::set<std::string> stop{"a", "an", "the", "of", "to", "in", "and", "or", "is", "are",
                                            "we", "our", "this", "that", "for", "on", "with", "be", "it", "as"};
    std::set<std::string> out;
    for (auto& t : text::word_tokens(s))
        if (!stop.count(t)) out.insert(std::move(t));
    return out;
}

double coverage(const std::set<std::string>& needles, const std::set<std::string>& hay) {
    if (needles.empty()) return 0.0;
    std::size_t hit = 0;
    for (const auto& t : needles) hit += hay.count(t);
    return static_cast<double>(hit) / static_cast<double>(needles.size());
}

int clamp_score(double x) { return std::clamp(static_cast<int>(x + 0.5), 1, 5); }

}  // namespace

std::string generate(const ChatRequest& r) {
    const json& p = r.payload;
    auto edits = strings_at(p, "edits");
    std::vector<std::string> parts{std::string(mock_action_phrase(ResponseAction::Social)) + " this comment."};
    std::size_t next_edit = 0;
    auto content = [&]() -> std::string {
        if (edits.empty()) return "[author info: supporting details for this point].";
        std::string e = strip_final_period(edits[next_edit % edits.size()]);
        ++next_edit;
        return e + ".";
    };
    bool planned = false;
    if (auto it = p.find("plan"); it != p.end() && it->is_array()) {
        for (const auto& item : *it) {
            for (const auto& label : item.value("actions", json::array())) {
                auto a = parse_action(label.get<std::string>());
                if (!a || *a == ResponseAction::Social) continue;
                parts.push_back(std::string(mock_action_phrase(*a)) + " " + content());
                planned = true;
            }
        }
    }
    if (!planned) {
        if (edits.empty()) {
            parts.push_back(std::string(mock_action_phrase(ResponseAction::TaskWillBeDoneInNextVersion)) + " " +
                            content());
        }
        for (std::size_t i = 0; i < edits.size(); ++i) {
            parts.push_back(std::string(mock_action_phrase(ResponseAction::TaskHasBeenDone)) + " " + content());
        }
    }
    return truncate_words(text::join(parts, " "), p.value("length_limit", json()));
}

std::string refine(const ChatRequest& r) {
    const json& p = r.payload;
    std::string prev = p.value("previous", std::string{});
    if (prev.empty()) return generate(r);
    static const std::string closing = "In summary, we will clarify this point in the final version.";
    if (prev.size() >= closing.size() && prev.compare(prev.size() - closing.size(), closing.size(), closing) == 0)
        return prev;
    std::string out = prev + " " + closing;
    auto limited = truncate_words(out, p.value("length_limit", json()));
    return limited;
}

std::string annotate(const ChatRequest& r) {
    const json& p = r.payload;
    json items = json::array();
    std::size_t qn = 0, cn = 0, rn = 0;
    for (const auto& s : sentences_of(p.value("review", std::string{}))) {
        std::string lower = text::ascii_lower(s);
        ItemType t = ItemType::Criticism;
        std::string id;
        if (!s.empty() && s.back() == '?') {
            t = ItemType::Question;
            id = "Q" + std::to_string(++qn);
        } else if (text::contains(lower, "please") || text::contains(lower, "should") ||
                   text::contains(lower, "would be")) {
            t = ItemType::Request;
            id = "R" + std::to_string(++rn);
        } else {
            id = "C" + std::to_string(++cn);
        }
        items.push_back({{"id", id}, {"type", to_string(t)}, {"text", s}});
    }
    json spans = json::array();
    std::size_t k = 0;
    for (const auto& s : sentences_of(p.value("response", std::string{}))) {
        ResponseAction action = ResponseAction::Other;
        std::size_t best = 0;
        for (const auto& info : kActionTable) {
            auto phrase = mock_action_phrase(info.action);
            if (s.rfind(phrase, 0) == 0 && phrase.size() > best) {
                best = phrase.size();
                action = info.action;
            }
        }
        json ids = json::array();
        if (!items.empty() && stance_of(action) != Stance::Social) {
            ids.push_back(items[std::min(k, items.size() - 1)]["id"]);
            ++k;
        }
        spans.push_back({{"text", s}, {"item_ids", ids}, {"action", to_string(action)}});
    }
    return json{{"review_items", items}, {"response_spans", spans}}.dump();
}

std::string quality(const ChatRequest& r) {
    const json& p = r.payload;
    auto review = content_tokens(p.value("review", std::string{}));
    std::string response = p.value("response", std::string{});
    auto resp = content_tokens(response);
    double targ = 1.0 + 4.0 * coverage(review, resp);
    double words = static_cast<double>(text::word_count(response));
    double spec = 1.0 + std::min(4.0, words / 25.0);
    double conv = (targ + spec) / 2.0;
    json scores{{"targeting", clamp_score(targ)}, {"specificity", clamp_score(spec)},
                {"convincingness", clamp_score(conv)}};
    json just = json::object();
    json sugg = json::object();
    for (const char* dim : {"targeting", "specificity", "convincingness"}) {
        int s = scores[dim].get<int>();
        json strengths = json::array();
        json weaknesses = json::array();
        json suggestions = json::array();
        if (s >= 4) strengths.push_back(std::string("strong ") + dim);
        if (s <= 4) {
            weaknesses.push_back(std::string("limited ") + dim);
            suggestions.push_back(std::string("improve ") + dim + " with concrete evidence");
        }
        just[dim] = {{"strengths", strengths}, {"weaknesses", weaknesses}};
        sugg[dim] = suggestions;
    }
    return json{{"scores", scores}, {"justifications", just}, {"suggestions", sugg}}.dump();
}

std::string extract_facts(const ChatRequest& r) {
    json facts = json::array();
    for (const auto& s : sentences_of(r.payload.value("text", std::string{}))) {
        std::string lower = text::ascii_lower(s);
        if (text::contains(lower, "thank")) continue;
        if (content_tokens(s).empty()) continue;
        facts.push_back(s);
    }
    return json{{"facts", facts}}.dump();
}

std::string verify(const ChatRequest& r) {
    auto context = content_tokens(r.payload.value("context", std::string{}));
    json verdicts = json::array();
    for (const auto& f : strings_at(r.payload, "facts")) {
        verdicts.push_back(coverage(content_tokens(f), context) >= 0.6 ? "supported" : "unsupported");
    }
    return json{{"verdicts", verdicts}}.dump();
}

}  // namespace mock

}  // namespace respkit::providers
