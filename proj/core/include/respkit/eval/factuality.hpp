#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "respkit/eval/report.hpp"
#include "respkit/providers/provider.hpp"

namespace respkit::eval {

/// Decomposes text into atomic facts. Expects {"facts": [string, ...]}.
std::vector<std::string> extract_facts(std::string_view text, providers::ChatProvider& extractor);

/// One verdict per fact against the context. Expects {"verdicts": [label, ...]} with labels
/// supported / unsupported / contradicted and exactly one per fact.
std::vector<Verdict> verify_facts(const std::vector<std::string>& facts, std::string_view context,
                                  providers::ChatProvider& verifier);

/// Everything the generator was given.
struct GroundingInputs {
    std::vector<std::string> edit_strings;
    std::vector<std::string> paragraph_contexts;
    std::vector<std::string> v1_paragraphs;

    std::string joined() const;
};

/// Facts of the response checked against all inputs. Any provider or schema failure aborts
/// the whole response; no partial verdicts are returned.
FactVerdicts gfp(std::string_view response, const GroundingInputs& inputs, providers::ChatProvider& extractor,
                 providers::ChatProvider& verifier);

/// Facts of the edit strings checked against the response.
/// Throws ValidationError when there are no edit strings.
FactVerdicts icr(const std::vector<std::string>& edit_strings, std::string_view response,
                 providers::ChatProvider& extractor, providers::ChatProvider& verifier);

}  // namespace respkit::eval
