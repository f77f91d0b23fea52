#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "ratlop/errors.hpp"
#include "ratlop/timeline.hpp"

namespace ratlop {

struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
  std::string content_type;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Maps an error code onto the HTTP status and the public error code set
/// {validation, not_found, integrity, infeasible, conflict}.
int http_status(ErrorCode code);
std::string api_error_code(ErrorCode code);
HttpResponse error_response(const Error& error);

/// Transport-independent request router over a TimelineStore.
///
///   PUT  /bcns/{id}                        store a model document
///   GET  /bcns/{id}                        stored model document
///   POST /bcns/{id}/assessments/{period}   assess and record (?dry_run=true to preview)
///   GET  /bcns/{id}/assessments/{period}   latest revision for the period
///   GET  /bcns/{id}/trend?from=&to=        trend over recorded periods
///   POST /bcns/{id}/plan                   scenario from the latest assessment
///   POST /bcns/{id}/simulate               scores after applying a list of actions
class ApiService {
public:
  explicit ApiService(TimelineStore& store) : store_(store) {}

  HttpResponse handle(const HttpRequest& request) const;

private:
  HttpResponse route(const HttpRequest& request) const;

  TimelineStore& store_;
};

/// HTTP/1.1 front end for an ApiService.
class HttpServer {
public:
  HttpServer(const ApiService& service, std::optional<std::filesystem::path> static_dir = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds without serving; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called.
  bool listen();
  void stop();
  void wait_until_ready() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ratlop
