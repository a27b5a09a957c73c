#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anchorlight/html.hpp"
#include "anchorlight/store.hpp"
#include "anchorlight/text.hpp"

namespace anchorlight::crawl {

enum class Status { Ok, HttpError, Timeout, ConnectionError, DecodeError, NonHtml, IndexError };

std::string_view to_string(Status status);

struct FetchResult {
  Status status = Status::Ok;
  int http_code = 0;
  std::string body;
  std::string content_type;
  std::string detail;
};

/// Performs one GET. Must be callable from several threads at once.
using FetchFn = std::function<FetchResult(std::string_view url)>;

struct HttpOptions {
  std::chrono::milliseconds timeout{10000};
  std::string user_agent = "anchorlight/1.0";
};

/// cpp-httplib backed fetcher; follows redirects and honours http_proxy,
/// https_proxy and no_proxy.
FetchResult http_get(std::string_view url, const HttpOptions& options);

struct CrawlConfig {
  std::vector<std::string> seeds;
  int max_depth = 2;
  std::chrono::milliseconds fetch_timeout{10000};
  std::chrono::milliseconds per_host_delay{200};
  std::optional<std::size_t> max_pages;
  std::string user_agent = "anchorlight/1.0";
  int max_in_flight = 8;
  /// Replaces http_get when set.
  FetchFn fetch;
  /// Runs inside the per-page write transaction before anything is written;
  /// throwing marks the page index_error.
  std::function<void(std::string_view url)> before_index;
  /// Per-page progress lines; null for silence.
  std::ostream* log = nullptr;
};

struct FetchOutcome {
  std::string url;
  Status status = Status::Ok;
  int http_code = 0;
  int depth = 0;
  std::optional<PageId> page_id;
  std::vector<html::Link> out_links;
  std::string detail;
};

struct CrawlReport {
  std::size_t pages_ok = 0;
  std::size_t pages_skipped = 0;  // already indexed before this crawl
  std::map<Status, std::size_t> pages_failed;
  double duration_seconds = 0.0;
  std::vector<FetchOutcome> outcomes;  // fetch order

  std::size_t failed(Status s) const {
    auto it = pages_failed.find(s);
    return it == pages_failed.end() ? 0 : it->second;
  }
  std::size_t failed_total() const;
  std::string to_json() const;
};

/// The text pipeline settings an index was built with.
struct Pipeline {
  bool stemming = true;
  const text::StopList* stops = &text::StopList::standard();

  static Pipeline for_index(const IndexStore& store);
};

/// Writes postings for the page text and one link row (plus its anchor terms)
/// per anchor. A page that is already indexed is returned untouched.
PageId index_page(IndexStore& store, std::string_view url, std::string_view text,
                  const std::vector<html::Link>& links, const Pipeline& pipeline,
                  const std::function<void(std::string_view)>& before_index = {});

/// Breadth-first crawl to cfg.max_depth hops from the seeds. Page-level
/// failures are recorded and skipped; only CorruptIndex, StorageFailure and
/// ReadOnly errors from the index propagate.
CrawlReport crawl(IndexStore& store, const CrawlConfig& cfg);

}  // namespace anchorlight::crawl
