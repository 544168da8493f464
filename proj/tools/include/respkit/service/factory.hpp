#pragma once

#include <memory>

#include "respkit/eval/evaluate.hpp"
#include "respkit/providers/audit.hpp"
#include "respkit/providers/provider.hpp"
#include "respkit/service/config.hpp"

namespace respkit::service {

/// Every provider a pipeline run may need. Disabled roles are null.
/// Chat providers are wrapped with retries and auditing when built from a config.
struct ProviderSet {
    std::shared_ptr<providers::AuditLog> audit;
    std::shared_ptr<providers::ChatProvider> generator;
    std::shared_ptr<providers::ChatProvider> judge;
    std::shared_ptr<providers::Embedder> embedder;
    std::shared_ptr<providers::Reranker> reranker;
    std::shared_ptr<providers::PairClassifier> ce_classifier;
    std::shared_ptr<providers::PairClassifier> ae_classifier;

    /// The judge fills the annotation, quality, extraction and verification roles.
    eval::Judges judges() const { return {judge.get(), judge.get(), judge.get()}; }
};

ProviderSet build_providers(const Config& config);

/// Wraps raw chat providers with auditing; used when callers inject their own providers.
ProviderSet audited(std::shared_ptr<providers::ChatProvider> generator, std::shared_ptr<providers::ChatProvider> judge,
                    std::shared_ptr<providers::AuditLog> audit, providers::RetryPolicy retry = {});

}  // namespace respkit::service
