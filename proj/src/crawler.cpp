#include "anchorlight/crawler.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <ostream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "anchorlight/url.hpp"

namespace anchorlight::crawl {

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Ok: return "ok";
    case Status::HttpError: return "http_error";
    case Status::Timeout: return "timeout";
    case Status::ConnectionError: return "connection_error";
    case Status::DecodeError: return "decode_error";
    case Status::NonHtml: return "non_html";
    case Status::IndexError: return "index_error";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

std::string env(const char* lower_name, const char* upper_name) {
  if (const char* v = std::getenv(lower_name); v && *v) return v;
  if (const char* v = std::getenv(upper_name); v && *v) return v;
  return {};
}

bool bypass_proxy(const std::string& host) {
  if (host == "localhost" || host == "127.0.0.1" || host == "[::1]") return true;
  std::string list = env("no_proxy", "NO_PROXY");
  std::size_t pos = 0;
  while (pos <= list.size()) {
    auto comma = list.find(',', pos);
    if (comma == std::string::npos) comma = list.size();
    std::string entry = list.substr(pos, comma - pos);
    entry.erase(std::remove(entry.begin(), entry.end(), ' '), entry.end());
    if (entry == "*") return true;
    if (!entry.empty()) {
      if (entry.front() == '.') entry.erase(0, 1);
      if (host == entry || (host.size() > entry.size() && host.ends_with("." + entry))) return true;
    }
    pos = comma + 1;
  }
  return false;
}

void apply_proxy(httplib::Client& client, const Url& url) {
  if (bypass_proxy(url.host)) return;
  std::string proxy = url.scheme == "https" ? env("https_proxy", "HTTPS_PROXY") : env("http_proxy", "HTTP_PROXY");
  if (proxy.empty()) return;
  if (proxy.find("://") == std::string::npos) proxy = "http://" + proxy;
  if (auto p = Url::parse(proxy)) client.set_proxy(p->host, p->effective_port());
}

bool is_html_type(std::string_view content_type) {
  std::string ct(content_type);
  std::transform(ct.begin(), ct.end(), ct.begin(), [](unsigned char c) { return std::tolower(c); });
  return ct.find("text/html") != std::string::npos || ct.find("application/xhtml") != std::string::npos;
}

bool fatal(const Error& e) {
  return e.code() == ErrorCode::CorruptIndex || e.code() == ErrorCode::StorageFailure ||
         e.code() == ErrorCode::ReadOnly;
}

// Serializes request start times per host.
class HostThrottle {
 public:
  explicit HostThrottle(std::chrono::milliseconds delay) : delay_(delay) {}

  void wait(const std::string& host) {
    if (delay_.count() <= 0) return;
    Clock::time_point slot;
    {
      std::lock_guard lock(mutex_);
      auto now = Clock::now();
      auto& next = next_[host];
      slot = std::max(now, next);
      next = slot + delay_;
    }
    std::this_thread::sleep_until(slot);
  }

 private:
  std::chrono::milliseconds delay_;
  std::mutex mutex_;
  std::unordered_map<std::string, Clock::time_point> next_;
};

}  // namespace

FetchResult http_get(std::string_view url_str, const HttpOptions& options) {
  FetchResult r;
  auto url = Url::parse(url_str);
  if (!url) {
    r.status = Status::ConnectionError;
    r.detail = "unparseable url";
    return r;
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (url->scheme == "https") {
    r.status = Status::ConnectionError;
    r.detail = "https not supported in this build";
    return r;
  }
#endif
  httplib::Client client(url->scheme + "://" + url->authority());
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  client.set_follow_location(true);
  client.set_default_headers({{"User-Agent", options.user_agent}});
  apply_proxy(client, *url);

  auto start = Clock::now();
  auto res = client.Get(url->target());
  if (!res) {
    auto elapsed = Clock::now() - start;
    bool timed_out = res.error() == httplib::Error::ConnectionTimeout ||
                     elapsed >= options.timeout * 9 / 10;
    r.status = timed_out ? Status::Timeout : Status::ConnectionError;
    r.detail = httplib::to_string(res.error());
    return r;
  }
  r.http_code = res->status;
  if (res->status < 200 || res->status >= 300) {
    r.status = Status::HttpError;
    r.detail = "HTTP " + std::to_string(res->status);
    return r;
  }
  r.content_type = res->get_header_value("Content-Type");
  r.body = std::move(res->body);
  return r;
}

std::size_t CrawlReport::failed_total() const {
  std::size_t n = 0;
  for (const auto& [status, count] : pages_failed) n += count;
  return n;
}

std::string CrawlReport::to_json() const {
  nlohmann::ordered_json failed = nlohmann::ordered_json::object();
  for (Status s : {Status::HttpError, Status::Timeout, Status::ConnectionError, Status::DecodeError,
                   Status::NonHtml, Status::IndexError})
    failed[std::string(crawl::to_string(s))] = this->failed(s);
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (const auto& o : outcomes) {
    if (o.status == Status::Ok) continue;
    nlohmann::ordered_json f;
    f["url"] = o.url;
    f["status"] = crawl::to_string(o.status);
    if (o.http_code) f["http_code"] = o.http_code;
    f["detail"] = o.detail;
    failures.push_back(std::move(f));
  }
  nlohmann::ordered_json j;
  j["pages_ok"] = pages_ok;
  j["pages_skipped"] = pages_skipped;
  j["pages_failed"] = std::move(failed);
  j["duration_s"] = duration_seconds;
  j["failures"] = std::move(failures);
  return j.dump();
}

Pipeline Pipeline::for_index(const IndexStore& store) {
  Pipeline p;
  p.stemming = store.meta().stemming_enabled;
  return p;
}

PageId index_page(IndexStore& store, std::string_view url, std::string_view text,
                  const std::vector<html::Link>& links, const Pipeline& pipeline,
                  const std::function<void(std::string_view)>& before_index) {
  if (auto existing = store.find_url(url); existing && store.is_indexed(*existing)) return *existing;

  IndexStore::Transaction tx(store);
  if (before_index) before_index(url);
  PageId page = store.get_or_insert_url(url);
  auto tokens = text::normalize(text, pipeline.stemming, *pipeline.stops, text::Source::Content).tokens;
  std::unordered_map<std::string, WordId> words;
  auto word_id = [&](const std::string& term) {
    auto it = words.find(term);
    if (it == words.end()) it = words.emplace(term, store.get_or_insert_word(term)).first;
    return it->second;
  };
  for (std::size_t i = 0; i < tokens.size(); ++i)
    store.add_posting({page, word_id(tokens[i]), static_cast<std::int64_t>(i)});
  for (const auto& link : links) {
    PageId target = store.get_or_insert_url(link.url);
    LinkId linkid = store.add_link(page, target);
    auto anchor = text::normalize(link.anchor_text, pipeline.stemming, *pipeline.stops, text::Source::Anchor);
    for (const auto& term : anchor.tokens) store.add_link_word(word_id(term), linkid);
  }
  store.mark_indexed(page);
  tx.commit();
  return page;
}

CrawlReport crawl(IndexStore& store, const CrawlConfig& cfg) {
  auto start = Clock::now();
  CrawlReport report;
  const Pipeline pipeline = Pipeline::for_index(store);
  HttpOptions http{cfg.fetch_timeout, cfg.user_agent};
  FetchFn fetch = cfg.fetch ? cfg.fetch : FetchFn([http](std::string_view u) { return http_get(u, http); });
  HostThrottle throttle(cfg.per_host_delay);

  std::unordered_set<std::string> seen;
  std::vector<std::string> layer;
  for (const auto& seed : cfg.seeds) {
    auto normalized = normalize_url(seed, "");
    if (!normalized) {
      FetchOutcome o;
      o.url = seed;
      o.status = Status::ConnectionError;
      o.detail = "invalid seed url";
      ++report.pages_failed[o.status];
      report.outcomes.push_back(std::move(o));
      continue;
    }
    if (seen.insert(*normalized).second) layer.push_back(*normalized);
  }

  std::size_t attempted = 0;
  for (int depth = 0; depth <= cfg.max_depth && !layer.empty(); ++depth) {
    std::vector<std::string> batch;
    for (auto& url : layer) {
      if (auto id = store.find_url(url); id && store.is_indexed(*id)) {
        ++report.pages_skipped;
        continue;
      }
      if (cfg.max_pages && attempted + batch.size() >= *cfg.max_pages) break;
      batch.push_back(std::move(url));
    }
    attempted += batch.size();

    std::vector<FetchResult> fetched(batch.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < batch.size(); i = next++) {
        auto url = Url::parse(batch[i]);
        throttle.wait(url ? url->host : std::string());
        try {
          fetched[i] = fetch(batch[i]);
        } catch (const std::exception& e) {
          fetched[i].status = Status::ConnectionError;
          fetched[i].detail = e.what();
        }
      }
    };
    int workers = std::clamp<int>(cfg.max_in_flight, 1, std::max<int>(1, static_cast<int>(batch.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<std::string> next_layer;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      FetchOutcome o;
      o.url = batch[i];
      o.depth = depth;
      FetchResult& f = fetched[i];
      o.status = f.status;
      o.http_code = f.http_code;
      o.detail = f.detail;
      if (o.status == Status::Ok) {
        bool html_like = f.content_type.empty() ? html::looks_like_html(f.body) : is_html_type(f.content_type);
        if (!html_like) {
          o.status = Status::NonHtml;
          o.detail = f.content_type.empty() ? "undeclared, not html" : f.content_type;
        }
      }
      std::optional<html::Page> page;
      if (o.status == Status::Ok) {
        page = html::extract(f.body, o.url, html::charset_from_content_type(f.content_type));
        if (!page) {
          o.status = Status::DecodeError;
          o.detail = "body not decodable";
        }
      }
      if (o.status == Status::Ok) {
        try {
          o.page_id = index_page(store, o.url, page->text, page->links, pipeline, cfg.before_index);
          o.out_links = std::move(page->links);
        } catch (const Error& e) {
          if (fatal(e)) throw;
          o.status = Status::IndexError;
          o.detail = e.what();
        } catch (const std::exception& e) {
          o.status = Status::IndexError;
          o.detail = e.what();
        }
      }
      if (cfg.log)
        *cfg.log << "[depth " << depth << "] " << to_string(o.status) << " " << o.url
                 << (o.detail.empty() ? "" : " (" + o.detail + ")") << '\n';
      if (o.status == Status::Ok) {
        ++report.pages_ok;
        if (depth < cfg.max_depth)
          for (const auto& link : o.out_links)
            if (seen.insert(link.url).second) next_layer.push_back(link.url);
      } else {
        ++report.pages_failed[o.status];
      }
      report.outcomes.push_back(std::move(o));
    }
    layer = std::move(next_layer);
  }
  report.duration_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

}  // namespace anchorlight::crawl
