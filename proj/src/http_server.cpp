#include <httplib.h>

#include "ratlop/api.hpp"

namespace ratlop {

struct HttpServer::Impl {
  const ApiService& service;
  httplib::Server server;

  explicit Impl(const ApiService& s) : service(s) {}

  void dispatch(const httplib::Request& req, httplib::Response& res) const {
    HttpRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [key, value] : req.params) request.query[key] = value;
    request.body = req.body;
    request.content_type = req.get_header_value("Content-Type");
    const auto response = service.handle(request);
    res.status = response.status;
    res.set_content(response.body, response.content_type);
  }
};

HttpServer::HttpServer(const ApiService& service, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    impl_->dispatch(req, res);
  };
  const std::string pattern = R"(/bcns/.*)";
  impl_->server.Get(pattern, handler);
  impl_->server.Put(pattern, handler);
  impl_->server.Post(pattern, handler);
  if (static_dir) impl_->server.set_mount_point("/", static_dir->string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace ratlop
