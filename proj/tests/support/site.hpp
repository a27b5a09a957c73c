#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fixture_server.hpp"

namespace anchorlight::testing {

/// A synthetic site: page i links to every page in links[i]. Page 0 is the root.
struct SiteSpec {
  std::vector<std::vector<int>> links;
  int size() const { return static_cast<int>(links.size()); }
};

/// "/" for page 0, "/p<i>.html" otherwise.
std::string site_path(int page);
int page_of_path(const std::string& path);  // -1 if not a site page

/// 50 pages, every page within two hops of the root, with back-links and cycles.
SiteSpec fifty_page_site();
/// n pages with random out-links; some pages sit deeper than two hops or are unreachable.
SiteSpec random_site(int n, std::uint64_t seed);

/// Shortest hop count from `root` (-1 when unreachable); plain queue BFS.
std::vector<int> bfs_distances(const SiteSpec& site, int root = 0);

/// Deterministic HTML per page. Includes fragment-only and mailto anchors
/// that must not become links.
std::string render_page(const SiteSpec& site, int page);
std::map<std::string, Route> render_site(const SiteSpec& site);

}  // namespace anchorlight::testing
