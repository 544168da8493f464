#pragma once

#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "respkit/service/session.hpp"

namespace respkit::service {

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

/// Transport-independent /v1/ routing:
///   GET  /v1/health
///   GET  /v1/sessions                      POST /v1/sessions
///   GET  /v1/sessions/{id}
///   PUT  /v1/sessions/{id}/inputs          PUT  /v1/sessions/{id}/plan
///   POST /v1/sessions/{id}/annotate        POST /v1/sessions/{id}/generate
///   POST /v1/sessions/{id}/evaluate        POST /v1/sessions/{id}/refine
/// Errors are {"error": {"code", "message", "field"?, "audit_id"?}} with
/// 400 (bad request), 404 (unknown session or route), 409 (invalid transition or a busy
/// session), 502 (provider failure) and 500 (anything else).
ApiResponse route(SessionService& svc, const std::string& method, const std::string& path, const std::string& body);

struct ServerOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    /// Directory served at "/" (the browser bundle), if any.
    std::optional<std::string> static_dir;
};

/// HTTP front end over route().
class HttpServer {
public:
    HttpServer(SessionService& svc, ServerOptions opts);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds (port 0 picks a free port) and returns the bound port, or -1.
    int bind();
    /// Serves until stop(). Call after bind().
    bool serve();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace respkit::service
