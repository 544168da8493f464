#include "respkit/service/factory.hpp"

#include "respkit/providers/http.hpp"
#include "respkit/providers/local.hpp"
#include "respkit/providers/mock.hpp"

namespace respkit::service {

namespace {

providers::HttpEndpoint endpoint(const ProviderSpec& p, const char* role) {
    providers::HttpEndpoint ep;
    ep.base_url = p.base_url;
    ep.model = p.model;
    ep.api_key_env = p.api_key_env;
    if (ep.api_key_env.empty()) {
        ep.api_key_env = "RESPKIT_API_KEY_";
        for (const char* c = role; *c; ++c) ep.api_key_env += static_cast<char>(*c >= 'a' && *c <= 'z' ? *c - 32 : *c);
    }
    ep.timeout_s = p.timeout_s;
    ep.temperature = p.temperature;
    return ep;
}

std::shared_ptr<providers::ChatProvider> chat(const ProviderSpec& p, const char* role) {
    if (p.kind == "mock") return std::make_shared<providers::MockChatProvider>();
    if (p.kind == "http") return std::make_shared<providers::HttpChatProvider>(endpoint(p, role));
    return nullptr;
}

std::shared_ptr<providers::PairClassifier> classifier(const ProviderSpec& p, const char* role) {
    if (p.kind == "http") return std::make_shared<providers::HttpPairClassifier>(endpoint(p, role));
    return nullptr;
}

}  // namespace

ProviderSet audited(std::shared_ptr<providers::ChatProvider> generator, std::shared_ptr<providers::ChatProvider> judge,
                    std::shared_ptr<providers::AuditLog> audit, providers::RetryPolicy retry) {
    ProviderSet set;
    set.audit = audit ? std::move(audit) : std::make_shared<providers::AuditLog>();
    if (generator) set.generator = std::make_shared<providers::AuditedChatProvider>(std::move(generator), set.audit, retry);
    if (judge) set.judge = std::make_shared<providers::AuditedChatProvider>(std::move(judge), set.audit, retry);
    return set;
}

ProviderSet build_providers(const Config& config) {
    config.validate();
    auto log = config.audit_log.empty() ? std::make_shared<providers::AuditLog>()
                                        : std::make_shared<providers::AuditLog>(config.audit_log);
    ProviderSet set = audited(chat(config.generator, "generator"), chat(config.judge, "judge"), log, config.retry);

    if (config.embedder.kind == "hashing")
        set.embedder = std::make_shared<providers::HashingEmbedder>(config.embedder.dim);
    else if (config.embedder.kind == "http")
        set.embedder = std::make_shared<providers::HttpEmbedder>(endpoint(config.embedder, "embedder"));

    if (config.reranker.kind == "lexical")
        set.reranker = std::make_shared<providers::LexicalReranker>();
    else if (config.reranker.kind == "identity")
        set.reranker = std::make_shared<providers::IdentityReranker>();
    else if (config.reranker.kind == "http")
        set.reranker = std::make_shared<providers::HttpReranker>(endpoint(config.reranker, "reranker"));

    set.ce_classifier = classifier(config.ce_classifier, "ce_classifier");
    set.ae_classifier = classifier(config.ae_classifier, "ae_classifier");
    return set;
}

}  // namespace respkit::service
