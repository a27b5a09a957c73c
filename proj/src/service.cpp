#include "anchorlight/service.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>

namespace anchorlight::service {

namespace {

constexpr const char* kPlaceholderPage = R"html(<!doctype html>
<html><head><meta charset="utf-8"><title>anchorlight</title></head>
<body>
<h1>anchorlight</h1>
<p>The browser UI bundle is not installed. The JSON API is available:</p>
<ul>
<li><a href="/api/meta">/api/meta</a></li>
<li><code>/api/search?q=...&amp;mode=qd&amp;scheme=4&amp;limit=10&amp;w.bm25=1</code></li>
</ul>
</body></html>
)html";

double parse_double(std::string_view key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw BadRequest("malformed value for " + std::string(key) + ": '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v))
    throw BadRequest("malformed value for " + std::string(key) + ": '" + text + "'");
  return v;
}

long parse_long(std::string_view key, const std::string& text) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw BadRequest("malformed value for " + std::string(key) + ": '" + text + "'");
  return v;
}

std::string error_json(std::string_view code, std::string_view message) {
  nlohmann::ordered_json j;
  j["error"] = code;
  j["message"] = message;
  return j.dump();
}

}  // namespace

query::ScorerWeights parse_weights(const std::vector<std::pair<std::string, std::string>>& pairs,
                                   std::string_view preset, int scheme) {
  query::ScorerWeights w;
  w.anchor_scheme = scheme;
  if (pairs.empty()) {
    const query::Preset* p = query::find_preset(preset);
    if (!p) throw BadRequest("unknown preset '" + std::string(preset) + "'");
    w.weights = p->weights;
  }
  for (const auto& [key, value] : pairs) {
    auto scorer = query::parse_scorer(key);
    if (!scorer) throw BadRequest("unknown scorer '" + key + "'");
    double v = parse_double(key, value);
    if (v < 0.0) throw BadRequest("weight for " + key + " must be >= 0");
    w.weights[*scorer] = v;
  }
  if (scheme < 1 || scheme > 4) throw BadRequest("scheme must be 1..4");
  try {
    w.validate();
  } catch (const Error& e) {
    throw BadRequest(e.what());
  }
  return w;
}

SearchRequest parse_search_params(const std::multimap<std::string, std::string>& params,
                                  std::string_view default_preset) {
  SearchRequest r;
  auto q = params.find("q");
  if (q == params.end()) throw BadRequest("missing parameter q");
  r.q = q->second;
  if (auto m = params.find("mode"); m != params.end() && !m->second.empty()) {
    auto mode = query::parse_mode(m->second);
    if (!mode) throw BadRequest("mode must be qd or qi");
    r.mode = *mode;
  }
  int scheme = 4;
  if (auto s = params.find("scheme"); s != params.end() && !s->second.empty())
    scheme = static_cast<int>(parse_long("scheme", s->second));
  if (auto l = params.find("limit"); l != params.end() && !l->second.empty()) {
    long limit = parse_long("limit", l->second);
    if (limit <= 0) throw BadRequest("limit must be positive");
    r.limit = static_cast<std::size_t>(limit);
  }
  std::string preset(default_preset);
  if (auto p = params.find("preset"); p != params.end() && !p->second.empty()) preset = p->second;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& [key, value] : params)
    if (key.starts_with("w.")) pairs.emplace_back(key.substr(2), value);
  r.weights = parse_weights(pairs, preset, scheme);
  return r;
}

Reply handle_search(const IndexStore& store, const SearchRequest& request) {
  try {
    auto response = query::run_query(store, request.q, request.weights, request.mode, request.limit);
    return {200, response.to_json()};
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::EmptyQuery:
      case ErrorCode::NeedsAnalysis:
        return {422, error_json(to_string(e.code()), e.what())};
      case ErrorCode::InvalidWeight:
      case ErrorCode::InvalidScheme:
      case ErrorCode::UnknownScorer:
        return {400, error_json(to_string(e.code()), e.what())};
      default:
        return {500, error_json(to_string(e.code()), e.what())};
    }
  }
}

Reply handle_search(const IndexStore& store, const std::multimap<std::string, std::string>& params,
                    std::string_view default_preset) {
  SearchRequest request;
  try {
    request = parse_search_params(params, default_preset);
  } catch (const BadRequest& e) {
    return {400, error_json("BadRequest", e.what())};
  }
  return handle_search(store, request);
}

std::string meta_json(const IndexStore& store, std::string_view default_preset) {
  IndexStore::Snapshot snapshot(store);
  auto meta = store.meta();
  nlohmann::ordered_json analysis = nlohmann::ordered_json::object();
  for (ScoreTable t : kScoreTables)
    analysis[std::string(table_name(t))] = store.row_count(table_name(t)) > 0 ? "done" : "pending";
  analysis["hot_indexes"] = store.has_hot_indexes() ? "done" : "pending";

  const query::Preset* preset = query::find_preset(default_preset);
  nlohmann::ordered_json scorers = nlohmann::ordered_json::array();
  for (query::Scorer s : query::kScorers) {
    double w = 0.0;
    if (preset)
      if (auto it = preset->weights.find(s); it != preset->weights.end()) w = it->second;
    scorers.push_back({{"name", query::name(s)},
                       {"query_independent", query::query_independent(s)},
                       {"small_is_better", query::small_is_better(s)},
                       {"default_weight", w}});
  }
  nlohmann::ordered_json presets = nlohmann::ordered_json::array();
  for (const auto& p : query::presets()) {
    nlohmann::ordered_json weights = nlohmann::ordered_json::object();
    for (const auto& [s, w] : p.weights) weights[std::string(query::name(s))] = w;
    presets.push_back({{"name", p.name}, {"weights", weights}});
  }

  nlohmann::ordered_json j;
  j["pages"] = store.indexed_page_count();
  j["urls"] = store.page_count();
  j["words"] = store.word_count();
  j["stemming"] = meta.stemming_enabled;
  j["stop_list_version"] = meta.stop_list_version;
  j["analysis"] = std::move(analysis);
  j["scorers"] = std::move(scorers);
  j["presets"] = std::move(presets);
  j["default_preset"] = default_preset;
  return j.dump();
}

Reply handle_meta(const IndexStore& store, std::string_view default_preset) {
  return {200, meta_json(store, default_preset)};
}

struct Server::Impl {
  ServeConfig config;
  httplib::Server http;
  int port = -1;

  IndexStore open_index() const {
    OpenOptions options;
    options.read_only = true;
    return IndexStore::open(config.index_path, options);
  }

  void send(httplib::Response& res, const Reply& reply) const {
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  }

  void setup() {
    http.Get("/api/search", [this](const httplib::Request& req, httplib::Response& res) {
      std::multimap<std::string, std::string> params(req.params.begin(), req.params.end());
      try {
        auto store = open_index();
        send(res, handle_search(store, params, config.default_preset));
      } catch (const Error& e) {
        send(res, {500, error_json(to_string(e.code()), e.what())});
      }
    });
    http.Get("/api/meta", [this](const httplib::Request&, httplib::Response& res) {
      try {
        auto store = open_index();
        send(res, handle_meta(store, config.default_preset));
      } catch (const Error& e) {
        send(res, {500, error_json(to_string(e.code()), e.what())});
      }
    });
    bool has_bundle = !config.static_dir.empty() && std::filesystem::is_directory(config.static_dir) &&
                      http.set_mount_point("/", config.static_dir.string());
    if (!has_bundle) {
      http.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
      });
    }
  }
};

Server::Server(ServeConfig config) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  // Fail fast on a missing or foreign index.
  impl_->open_index();
  impl_->setup();
}

Server::~Server() { stop(); }

int Server::bind() {
  if (impl_->config.port == 0)
    impl_->port = impl_->http.bind_to_any_port(impl_->config.bind);
  else
    impl_->port = impl_->http.bind_to_port(impl_->config.bind, impl_->config.port) ? impl_->config.port : -1;
  return impl_->port;
}

bool Server::listen() {
  if (impl_->port < 0 && bind() < 0) return false;
  return impl_->http.listen_after_bind();
}

void Server::stop() {
  if (impl_->http.is_running()) impl_->http.stop();
}

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace anchorlight::service
