#include "respkit/providers/http.hpp"

#include <cstdlib>
#include <regex>

#include <httplib.h>

#include "respkit/error.hpp"

namespace respkit::providers {

using nlohmann::json;

ParsedUrl parse_url(const std::string& url) {
    static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(url, m, re)) throw ValidationError("invalid provider URL '" + url + "'");
    ParsedUrl out{m[1].str(), m[2].matched ? m[2].str() : std::string{}};
    while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
    return out;
}

json post_json(const HttpEndpoint& ep, const std::string& path, const json& body) {
    auto url = parse_url(ep.base_url);
    httplib::Client client(url.origin);
    auto secs = static_cast<time_t>(ep.timeout_s);
    auto usecs = static_cast<time_t>((ep.timeout_s - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers headers;
    if (!ep.api_key_env.empty()) {
        if (const char* key = std::getenv(ep.api_key_env.c_str()); key && *key) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }
    auto res = client.Post(url.path + path, headers, body.dump(), "application/json");
    if (!res) {
        throw ProviderError("request to " + ep.base_url + path + " failed: " + httplib::to_string(res.error()), true);
    }
    if (res->status == 429 || res->status >= 500) {
        throw ProviderError("provider " + ep.base_url + " answered HTTP " + std::to_string(res->status), true);
    }
    if (res->status < 200 || res->status >= 300) {
        throw ProviderError("provider " + ep.base_url + " answered HTTP " + std::to_string(res->status) + ": " +
                                res->body.substr(0, 200),
                            false);
    }
    try {
        return json::parse(res->body);
    } catch (const json::parse_error&) {
        throw ProtocolError("provider " + ep.base_url + " returned a non-JSON body");
    }
}

std::string parse_chat_answer(const json& j) {
    try {
        const auto& content = j.at("choices").at(0).at("message").at("content");
        if (!content.is_string()) throw ProtocolError("chat answer content is not text");
        return content.get<std::string>();
    } catch (const json::exception&) {
        throw ProtocolError("chat answer lacks choices[0].message.content");
    }
}

ChatResponse HttpChatProvider::complete(const ChatRequest& request) {
    json msgs = json::array();
    for (const auto& m : request.messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
    json body{{"model", ep_.model}, {"messages", std::move(msgs)}};
    if (auto t = request.temperature ? request.temperature : ep_.temperature) body["temperature"] = *t;
    return ChatResponse{parse_chat_answer(post_json(ep_, "/chat/completions", body)), {}, 1};
}

std::vector<Vector> HttpEmbedder::embed(std::span<const std::string> texts) {
    if (texts.empty()) return {};
    json body{{"model", ep_.model}, {"input", json(std::vector<std::string>(texts.begin(), texts.end()))}};
    auto j = post_json(ep_, "/embeddings", body);
    std::vector<Vector> out;
    try {
        const auto& data = j.at("data");
        out.resize(texts.size());
        std::size_t dim = 0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            std::size_t idx = data[i].value("index", i);
            if (idx >= out.size()) throw ProtocolError("embedding index out of range");
            out[idx] = data[i].at("embedding").get<Vector>();
            if (dim == 0) dim = out[idx].size();
            if (out[idx].size() != dim || dim == 0) throw ProtocolError("embeddings have inconsistent dimensions");
        }
        if (data.size() != texts.size()) throw ProtocolError("embedder returned a different number of vectors");
    } catch (const json::exception&) {
        throw ProtocolError("embedding answer lacks data[].embedding");
    }
    return out;
}

ClassifierVerdict parse_classifier_answer(const json& j) {
    if (!j.is_object() || !j.contains("label") || !j["label"].is_string())
        throw ProtocolError("classifier answer lacks a string 'label'");
    auto label = j["label"].get<std::string>();
    ClassifierVerdict v;
    if (label == "positive") {
        v.positive = true;
    } else if (label != "negative") {
        throw ProtocolError("classifier label must be 'positive' or 'negative', got '" + label + "'");
    }
    if (j.contains("score")) {
        if (!j["score"].is_number()) throw ProtocolError("classifier score must be a number");
        v.score = j["score"].get<double>();
        if (v.score < 0.0 || v.score > 1.0) throw ProtocolError("classifier score outside [0,1]");
    } else {
        v.score = v.positive ? 1.0 : 0.0;
    }
    return v;
}

ClassifierVerdict HttpPairClassifier::classify(std::string_view a, std::string_view b) {
    return parse_classifier_answer(post_json(ep_, "", json{{"text_a", a}, {"text_b", b}}));
}

std::vector<double> HttpReranker::score(std::string_view query, std::span<const std::string> passages) {
    json body{{"query", query}, {"passages", json(std::vector<std::string>(passages.begin(), passages.end()))}};
    auto j = post_json(ep_, "", body);
    try {
        auto scores = j.at("scores").get<std::vector<double>>();
        if (scores.size() != passages.size()) throw ProtocolError("reranker returned a different number of scores");
        return scores;
    } catch (const json::exception&) {
        throw ProtocolError("reranker answer lacks numeric 'scores'");
    }
}

}  // namespace respkit::providers
