#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <string>

namespace anchorlight::testing {

struct Route {
  int status = 200;
  std::string content_type = "text/html; charset=utf-8";  // empty: undeclared
  std::string body;
  std::chrono::milliseconds delay{0};  // sleep before answering
};

/// In-process HTTP server on 127.0.0.1 with a fixed path -> response table.
/// Unknown paths get 404. Counts requests per path.
class FixtureServer {
 public:
  explicit FixtureServer(std::map<std::string, Route> routes);
  ~FixtureServer();
  FixtureServer(const FixtureServer&) = delete;
  FixtureServer& operator=(const FixtureServer&) = delete;

  int port() const;
  /// "http://127.0.0.1:PORT"
  std::string origin() const;
  std::string url(const std::string& path) const { return origin() + path; }
  int hits(const std::string& path) const;
  std::map<std::string, int> all_hits() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace anchorlight::testing
