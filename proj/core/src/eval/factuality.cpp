#include "respkit/eval/factuality.hpp"

#include "respkit/error.hpp"
#include "respkit/eval/discourse.hpp"
#include "respkit/util/text.hpp"

namespace respkit::eval {

using nlohmann::json;

std::vector<std::string> extract_facts(std::string_view text, providers::ChatProvider& extractor) {
    providers::ChatRequest req;
    req.task = "extract_facts";
    std::string prompt =
        "Break the following text into a list of atomic facts. Each fact is one short, self-contained, verifiable "
        "statement. Skip greetings, thanks and statements without factual content.\n"
        "Return only a JSON object {\"facts\": [\"...\", ...]}.\n\nText:\n";
    prompt += text;
    req.messages.push_back({"user", std::move(prompt)});
    req.payload = {{"text", text}};
    auto raw = extractor.complete(req).text;
    auto j = extract_json_object(raw);
    if (!j.contains("facts") || !j["facts"].is_array()) throw SchemaError("facts: missing array 'facts'", raw);
    std::vector<std::string> out;
    for (const auto& f : j["facts"]) {
        if (!f.is_string()) throw SchemaError("facts: entries must be strings", raw);
        if (!text::trim(f.get<std::string>()).empty()) out.push_back(f.get<std::string>());
    }
    return out;
}

std::vector<Verdict> verify_facts(const std::vector<std::string>& facts, std::string_view context,
                                  providers::ChatProvider& verifier) {
    if (facts.empty()) return {};
    providers::ChatRequest req;
    req.task = "verify";
    std::string prompt =
        "For each numbered fact, decide whether the context supports it, contradicts it, or neither.\n"
        "Answer with one label per fact, in order: supported, unsupported or contradicted.\n"
        "Return only a JSON object {\"verdicts\": [\"supported\", ...]}.\n\nContext:\n";
    prompt += context;
    prompt += "\n\nFacts:\n";
    for (std::size_t i = 0; i < facts.size(); ++i) prompt += std::to_string(i + 1) + ". " + facts[i] + "\n";
    req.messages.push_back({"user", std::move(prompt)});
    req.payload = {{"facts", facts}, {"context", context}};
    auto raw = verifier.complete(req).text;
    auto j = extract_json_object(raw);
    if (!j.contains("verdicts") || !j["verdicts"].is_array())
        throw SchemaError("verdicts: missing array 'verdicts'", raw);
    if (j["verdicts"].size() != facts.size())
        throw SchemaError("verdicts: expected " + std::to_string(facts.size()) + " verdicts, got " +
                              std::to_string(j["verdicts"].size()),
                          raw);
    std::vector<Verdict> out;
    for (const auto& v : j["verdicts"]) {
        if (!v.is_string()) throw SchemaError("verdicts: entries must be strings", raw);
        auto parsed = parse_verdict(text::ascii_lower(v.get<std::string>()));
        if (!parsed) throw SchemaError("verdicts: unknown label '" + v.get<std::string>() + "'", raw);
        out.push_back(*parsed);
    }
    return out;
}

std::string GroundingInputs::joined() const {
    std::vector<std::string> parts;
    parts.insert(parts.end(), edit_strings.begin(), edit_strings.end());
    parts.insert(parts.end(), paragraph_contexts.begin(), paragraph_contexts.end());
    parts.insert(parts.end(), v1_paragraphs.begin(), v1_paragraphs.end());
    return text::join(parts, "\n");
}

FactVerdicts gfp(std::string_view response, const GroundingInputs& inputs, providers::ChatProvider& extractor,
                 providers::ChatProvider& verifier) {
    FactVerdicts fv;
    fv.facts = extract_facts(response, extractor);
    fv.verdicts = verify_facts(fv.facts, inputs.joined(), verifier);
    return fv;
}

FactVerdicts icr(const std::vector<std::string>& edit_strings, std::string_view response,
                 providers::ChatProvider& extractor, providers::ChatProvider& verifier) {
    if (edit_strings.empty()) throw ValidationError("input coverage is undefined without edit strings");
    FactVerdicts fv;
    fv.facts = extract_facts(text::join(edit_strings, "\n"), extractor);
    fv.verdicts = verify_facts(fv.facts, response, verifier);
    return fv;
}

}  // namespace respkit::eval
