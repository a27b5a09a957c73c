#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anchorlight/query.hpp"
#include "anchorlight/store.hpp"

namespace anchorlight::service {

/// Malformed request parameters (HTTP 400, CLI exit 2).
class BadRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SearchRequest {
  std::string q;
  query::Mode mode = query::Mode::QueryDependent;
  std::size_t limit = 10;
  query::ScorerWeights weights;
};

/// Builds weights from `name=value` pairs (or the preset when there are none)
/// and the anchor scheme. Throws BadRequest.
query::ScorerWeights parse_weights(const std::vector<std::pair<std::string, std::string>>& pairs,
                                   std::string_view preset, int scheme);

/// From /api/search parameters: q, mode, scheme, limit, w.<scorer>.
SearchRequest parse_search_params(const std::multimap<std::string, std::string>& params,
                                  std::string_view default_preset);

struct Reply {
  int status = 200;
  std::string body;  // JSON
};

Reply handle_search(const IndexStore& store, const SearchRequest& request);
Reply handle_search(const IndexStore& store, const std::multimap<std::string, std::string>& params,
                    std::string_view default_preset);
Reply handle_meta(const IndexStore& store, std::string_view default_preset);

/// {pages, urls, words, stemming, stop_list_version, analysis, scorers, presets, default_preset}
std::string meta_json(const IndexStore& store, std::string_view default_preset);

struct ServeConfig {
  std::filesystem::path index_path;
  std::string bind = "127.0.0.1";
  int port = 8080;
  std::filesystem::path static_dir;  // UI bundle; a placeholder page when empty or missing
  std::string default_preset = "descriptive-anchors";
};

/// Read-only JSON API plus static UI. Each request opens its own read-only
/// handle on the index.
class Server {
 public:
  explicit Server(ServeConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port or -1.
  int bind();
  /// Blocks until stop().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace anchorlight::service
