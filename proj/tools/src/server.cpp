#include "respkit/service/server.hpp"

#include <httplib.h>

#include <vector>

namespace respkit::service {

using nlohmann::json;

namespace {

ApiResponse failure(int status, const std::string& code, const std::string& message) {
    return {status, {{"error", {{"code", code}, {"message", message}}}}};
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : path.substr(0, path.find('?'))) {
        if (c == '/') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

ApiResponse dispatch(SessionService& svc, const std::string& method, const std::vector<std::string>& parts,
                     const json& body) {
    if (parts.size() < 2 || parts[0] != "v1") return failure(404, "not_found", "unknown route");
    if (parts[1] == "health" && parts.size() == 2 && method == "GET") return {200, {{"status", "ok"}}};
    if (parts[1] != "sessions") return failure(404, "not_found", "unknown route");

    if (parts.size() == 2) {
        if (method == "GET") return {200, svc.list()};
        if (method == "POST") return {201, svc.create(body)};
        return failure(405, "method_not_allowed", "use GET or POST");
    }
    const std::string& id = parts[2];
    if (parts.size() == 3) {
        if (method == "GET") return {200, svc.get(id)};
        return failure(405, "method_not_allowed", "use GET");
    }
    if (parts.size() != 4) return failure(404, "not_found", "unknown route");
    const std::string& verb = parts[3];
    if (method == "PUT" && verb == "inputs") return {200, svc.put_inputs(id, body)};
    if (method == "PUT" && verb == "plan") return {200, svc.put_plan(id, body)};
    if (method == "POST" && verb == "annotate") return {200, svc.annotate(id)};
    if (method == "POST" && verb == "generate") return {200, svc.generate(id, body)};
    if (method == "POST" && verb == "evaluate") return {200, svc.evaluate(id, body)};
    if (method == "POST" && verb == "refine") return {200, svc.refine(id, body)};
    return failure(404, "not_found", "unknown route");
}

}  // namespace

ApiResponse route(SessionService& svc, const std::string& method, const std::string& path, const std::string& body) {
    json parsed = json::object();
    if (!body.empty()) {
        parsed = json::parse(body, nullptr, false);
        if (parsed.is_discarded()) return failure(400, "bad_request", "request body is not valid JSON");
    }
    try {
        return dispatch(svc, method, split_path(path), parsed);
    } catch (const NotFound& e) {
        return failure(404, "not_found", e.what());
    } catch (const Conflict& e) {
        return failure(409, "conflict", e.what());
    } catch (const RequestValidationError& e) {
        auto r = failure(400, "invalid_request", e.what());
        r.body["error"]["field"] = e.field();
        return r;
    } catch (const ProviderError& e) {
        auto r = failure(502, "provider_error", e.what());
        r.body["error"]["audit_id"] = e.audit_id();
        r.body["error"]["retriable"] = e.retriable();
        return r;
    } catch (const SchemaError& e) {
        return failure(502, "schema_error", e.what());
    } catch (const ValidationError& e) {
        return failure(400, "invalid_request", e.what());
    } catch (const std::exception& e) {
        return failure(500, "internal", e.what());
    }
}

struct HttpServer::Impl {
    SessionService& svc;
    ServerOptions opts;
    httplib::Server server;

    Impl(SessionService& s, ServerOptions o) : svc(s), opts(std::move(o)) {}
};

HttpServer::HttpServer(SessionService& svc, ServerOptions opts) : impl_(std::make_unique<Impl>(svc, std::move(opts))) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        auto out = route(impl_->svc, req.method, req.path, req.body);
        res.status = out.status;
        res.set_content(out.body.dump(), "application/json");
    };
    for (const char* pattern : {R"(/v1/.*)", R"(/v1)"}) {
        impl_->server.Get(pattern, handler);
        impl_->server.Post(pattern, handler);
        impl_->server.Put(pattern, handler);
    }
    if (impl_->opts.static_dir) impl_->server.set_mount_point("/", *impl_->opts.static_dir);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
    if (impl_->opts.port == 0) return impl_->server.bind_to_any_port(impl_->opts.host);
    return impl_->server.bind_to_port(impl_->opts.host, impl_->opts.port) ? impl_->opts.port : -1;
}

bool HttpServer::serve() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace respkit::service
