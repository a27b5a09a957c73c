#include "fixture_server.hpp"

#include <httplib.h>

#include <mutex>
#include <thread>

namespace anchorlight::testing {

struct FixtureServer::Impl {
  std::map<std::string, Route> routes;
  httplib::Server http;
  std::thread thread;
  int port = -1;
  mutable std::mutex mutex;
  std::map<std::string, int> hits;
};

FixtureServer::FixtureServer(std::map<std::string, Route> routes) : impl_(std::make_unique<Impl>()) {
  impl_->routes = std::move(routes);
  Impl* impl = impl_.get();
  impl->http.Get(".*", [impl](const httplib::Request& req, httplib::Response& res) {
    {
      std::lock_guard lock(impl->mutex);
      ++impl->hits[req.path];
    }
    auto it = impl->routes.find(req.path);
    if (it == impl->routes.end()) {
      res.status = 404;
      res.set_content("not found", "text/plain");
      return;
    }
    const Route& r = it->second;
    if (r.delay.count() > 0) std::this_thread::sleep_for(r.delay);
    res.status = r.status;
    // httplib fills in text/plain for a body without the header, so an
    // undeclared type goes out as a blank value.
    res.set_content(r.body, r.content_type);
  });
  impl->port = impl->http.bind_to_any_port("127.0.0.1");
  impl->thread = std::thread([impl] { impl->http.listen_after_bind(); });
  impl->http.wait_until_ready();
}

FixtureServer::~FixtureServer() {
  impl_->http.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int FixtureServer::port() const { return impl_->port; }

std::string FixtureServer::origin() const { return "http://127.0.0.1:" + std::to_string(impl_->port); }

int FixtureServer::hits(const std::string& path) const {
  std::lock_guard lock(impl_->mutex);
  auto it = impl_->hits.find(path);
  return it == impl_->hits.end() ? 0 : it->second;
}

std::map<std::string, int> FixtureServer::all_hits() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->hits;
}

}  // namespace anchorlight::testing
