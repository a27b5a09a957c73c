#include "site.hpp"

#include <deque>
#include <random>
#include <set>

namespace anchorlight::testing {

namespace {

const std::vector<std::string> kTopics = {
    "harbor",  "lantern", "compass", "glacier", "orchard", "meadow",  "canyon",  "river",
    "falcon",  "willow",  "granite", "copper",  "violet",  "thunder", "saffron", "marble",
    "cedar",   "pebble",  "harvest", "beacon",  "summit",  "prairie", "coral",   "ember",
    "quartz",  "tundra",  "juniper", "lagoon",  "breeze",  "cobalt"};

const std::string& topic(int i) { return kTopics[static_cast<std::size_t>(i) % kTopics.size()]; }

}  // namespace

std::string site_path(int page) { return page == 0 ? "/" : "/p" + std::to_string(page) + ".html"; }

int page_of_path(const std::string& path) {
  if (path == "/") return 0;
  if (path.size() < 8 || path.compare(0, 2, "/p") != 0 || !path.ends_with(".html")) return -1;
  try {
    return std::stoi(path.substr(2, path.size() - 7));
  } catch (...) {
    return -1;
  }
}

SiteSpec fifty_page_site() {
  SiteSpec s;
  s.links.resize(50);
  for (int i = 1; i <= 7; ++i) s.links[0].push_back(i);
  for (int k = 8; k < 50; ++k) {
    s.links[1 + k % 7].push_back(k);
    s.links[1 + (k + 3) % 7].push_back(k);
  }
  for (int i = 1; i <= 7; ++i) s.links[i].push_back(0);       // back to root
  for (int i = 1; i <= 7; ++i) s.links[i].push_back(1 + i % 7);  // ring among hubs
  for (int k = 8; k < 50; ++k) {
    s.links[k].push_back(0);
    s.links[k].push_back(8 + (k - 8 + 1) % 42);  // ring among leaves
  }
  return s;
}

SiteSpec random_site(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SiteSpec s;
  s.links.resize(static_cast<std::size_t>(n));
  // A spanning chain keeps most pages reachable but deep; random extras add shortcuts and cycles.
  for (int i = 0; i + 1 < n; ++i)
    if (rng() % 5 != 0) s.links[static_cast<std::size_t>(i)].push_back(i + 1);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int i = 0; i < n; ++i) {
    int extra = static_cast<int>(rng() % 3);
    for (int e = 0; e < extra; ++e) s.links[static_cast<std::size_t>(i)].push_back(pick(rng));
  }
  return s;
}

std::vector<int> bfs_distances(const SiteSpec& site, int root) {
  std::vector<int> dist(site.links.size(), -1);
  std::deque<int> queue{root};
  dist[static_cast<std::size_t>(root)] = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : site.links[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(v)] != -1) continue;
      dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

std::string render_page(const SiteSpec& site, int page) {
  std::string html = "<!doctype html><html><head><title>Page " + std::to_string(page) + " " + topic(page) +
                     "</title><style>body { color: black }</style></head><body>\n";
  html += "<a href=\"#top\">skip</a>\n";
  html += "<p>This page describes the " + topic(page) + " and the " + topic(page * 7 + 3) +
          ". Visitors often compare " + topic(page + 11) + " with " + topic(page) + ".</p>\n";
  html += "<script>var tracking = 'ignored words here';</script>\n";
  int n = 0;
  for (int target : site.links[static_cast<std::size_t>(page)]) {
    // Alternate absolute and relative forms; both must normalize to the same URL.
    std::string href = site_path(target);
    if (n % 2 == 1 && target != 0) href = href.substr(1);
    if (n % 3 == 2) href += "#section";
    html += "<a href=\"" + href + "\">about " + topic(target) + "</a>\n";
    ++n;
  }
  html += "<a href=\"mailto:owner@example.com\">mail</a>\n";
  html += "</body></html>\n";
  return html;
}

std::map<std::string, Route> render_site(const SiteSpec& site) {
  std::map<std::string, Route> routes;
  for (int i = 0; i < site.size(); ++i) routes[site_path(i)].body = render_page(site, i);
  return routes;
}

}  // namespace anchorlight::testing
