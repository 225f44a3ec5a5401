#include <algorithm>
#include <cctype>

#include "httplib.h"

#include "gdm/service.hpp"

namespace gdm::service {

struct HttpServer::Impl {
  SessionService& service;
  httplib::Server server;

  explicit Impl(SessionService& s) : service(s) {}

  void dispatch(const httplib::Request& req, httplib::Response& res) {
    HttpRequest request{req.method, req.path, req.body, {}};
    for (const auto& [name, value] : req.headers) {
      std::string key = name;
      std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
      request.headers.emplace(std::move(key), value);
    }
    const HttpResponse response = service.handle(request);
    res.status = response.status;
    for (const auto& [name, value] : response.headers) res.set_header(name, value);
    res.set_content(response.body, "application/json");
  }
};

HttpServer::HttpServer(SessionService& service) : impl_(std::make_unique<Impl>(service)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) { impl_->dispatch(req, res); };
  impl_->server.set_payload_max_length(4 << 20);
  impl_->server.Get(".*", handler);
  impl_->server.Post(".*", handler);
  impl_->server.Put(".*", handler);
  impl_->server.Delete(".*", handler);
  impl_->server.Patch(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw IoError("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) throw IoError("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::serve() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace gdm::service
