#include "corpus.hpp"

#include "anchorlight/crawler.hpp"
#include "anchorlight/link_analysis.hpp"

namespace anchorlight::testing {

const std::vector<CorpusPage>& fixture_corpus() {
  static const std::vector<CorpusPage> pages = {
      {"http://fixture.test/navigation",
       "Navigation systems guide ships across the ocean. Navigation charts and navigation tools help sailors.",
       {{3, "Navigation encyclopedia"}, {2, "good page"}}},
      {"http://fixture.test/good",
       "This is a good page about good things. Page layout matters to readers.",
       {{1, "navigate ships"}, {4, "boats"}}},
      {"http://fixture.test/encyclopedia",
       "Encyclopedia entry covering maritime history, stars and compasses.",
       {{1, "home page"}, {5, "good page"}}},
      {"http://fixture.test/boats",
       "Boats and ships sail the sea. A good boat needs a good page of instructions.",
       {{2, "good page reading"}, {3, "navigational reference"}}},
      {"http://fixture.test/kitchen",
       "Cooking recipes for bread and soup, with a page of desserts.",
       {{4, "sea boats"}}},
      {"http://fixture.test/garden",
       "Gardening tips for spring flowers and summer vegetables.",
       {}},
      {"http://fixture.test/tools",
       "Navigate with navigation tools: a compass guide for travelers.",
       {{3, "navigation"}, {6, "garden tips"}, {3, "encyclopedia"}}},
      {"http://fixture.test/blank", "", {{1, ""}}},
  };
  return pages;
}

const std::vector<CorpusPage>& bm25_corpus() {
  static const std::vector<CorpusPage> pages = {
      {"http://bm25.test/d1", "cat dog cat", {}},
      {"http://bm25.test/d2", "dog fish", {}},
      {"http://bm25.test/d3", "cat fish fish bird", {}},
  };
  return pages;
}

IndexStore build_index(const std::filesystem::path& path, const std::vector<CorpusPage>& pages, bool analyze,
                       bool stemming) {
  OpenOptions options;
  options.create_if_missing = true;
  options.stemming = stemming;
  options.stop_list_version = text::StopList::standard().version();
  auto store = IndexStore::open(path, options);
  for (const auto& p : pages) store.get_or_insert_url(p.url);
  crawl::Pipeline pipeline;
  pipeline.stemming = stemming;
  for (const auto& p : pages) {
    std::vector<html::Link> links;
    for (const auto& l : p.links) links.push_back({pages[static_cast<std::size_t>(l.to - 1)].url, l.anchor});
    crawl::index_page(store, p.url, p.text, links, pipeline);
  }
  if (analyze) {
    links::compute_page_lengths(store);
    auto g = links::build_graph(store);
    links::compute_pagerank(store, g);
    links::compute_hits_global(store, g);
    links::compute_weighted_variants(store, g, links::unit_weight());
    store.create_hot_indexes();
  }
  return store;
}

OracleCorpus oracle_corpus(const std::vector<CorpusPage>& pages, bool stemming) {
  const auto& stops = text::StopList::standard();
  OracleCorpus oc;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    oc.tokens.push_back(text::normalize(pages[i].text, stemming, stops).tokens);
    for (const auto& l : pages[i].links)
      oc.links.push_back({static_cast<int>(i + 1), l.to, text::normalize(l.anchor, stemming, stops).tokens});
  }
  return oc;
}

}  // namespace anchorlight::testing
