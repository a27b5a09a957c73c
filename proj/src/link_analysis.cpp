#include "anchorlight/link_analysis.hpp"

#include <chrono>

namespace anchorlight::links {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void write_scores(IndexStore& store, ScoreTable table, const WebGraph& g, const Eigen::VectorXd& values,
                  const Eigen::VectorXd* constants = nullptr) {
  store.clear_scores(table);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (constants)
      store.put_score(table, g.nodes[i], values(i), (*constants)(i));
    else
      store.put_score(table, g.nodes[i], values(i));
  }
}

}  // namespace

Eigen::VectorXd node_weights(const WebGraph& g, const NodeWeightHook& hook) {
  const Eigen::VectorXd in = g.in_degree();
  const Eigen::VectorXd out = g.out_degree();
  Eigen::VectorXd w(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    double v = hook(static_cast<long>(in(i)), static_cast<long>(out(i)));
    if (!std::isfinite(v) || v <= 0.0)
      throw Error(ErrorCode::InvalidWeight, "node weight hook returned " + std::to_string(v) +
                                                " for page " + std::to_string(g.nodes[i].value));
    w(i) = v;
  }
  return w;
}

StepReport compute_page_lengths(IndexStore& store) {
  auto start = Clock::now();
  IndexStore::Transaction tx(store);
  store.clear_scores(ScoreTable::PageLength);
  auto pages = store.indexed_pages();
  for (PageId page : pages)
    store.put_score(ScoreTable::PageLength, page, static_cast<double>(store.posting_count(page)));
  tx.commit();
  StepReport r{"pagelength", 0, 0.0, seconds_since(start), std::to_string(pages.size()) + " pages"};
  return r;
}

StepReport compute_pagerank(IndexStore& store, const WebGraph& g, const PageRankOptions& options) {
  auto start = Clock::now();
  auto pr = pagerank<double>(g, options);
  IndexStore::Transaction tx(store);
  write_scores(store, ScoreTable::PageRank, g, pr.values);
  tx.commit();
  return {"pagerank", pr.iterations, pr.residual, seconds_since(start), {}};
}

StepReport compute_hits_global(IndexStore& store, const WebGraph& g, const HitsOptions& options) {
  auto start = Clock::now();
  Eigen::VectorXd authority;
  Eigen::VectorXd hub;
  StepReport report{"hits", 0, 0.0, 0.0, {}};
  try {
    auto result = hits<double>(g, options);
    authority = std::move(result.authority.values);
    hub = std::move(result.hub.values);
    report.iterations = result.authority.iterations;
    report.residual = result.authority.residual;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroGraph) throw;
    authority = hub = Eigen::VectorXd::Constant(g.size(), 1.0 / std::sqrt(static_cast<double>(g.size())));
    report.note = "no edges; uniform fallback";
  }
  IndexStore::Transaction tx(store);
  write_scores(store, ScoreTable::AuthHits, g, authority);
  write_scores(store, ScoreTable::HubHits, g, hub);
  tx.commit();
  report.seconds = seconds_since(start);
  return report;
}

StepReport compute_weighted_variants(IndexStore& store, const WebGraph& g, const NodeWeightHook& hook,
                                     const PageRankOptions& pr_options, const HitsOptions& hits_options) {
  auto start = Clock::now();
  const Eigen::VectorXd w = node_weights(g, hook);
  auto pr = pagerank<double>(g, pr_options, w);
  Eigen::VectorXd authority;
  Eigen::VectorXd hub;
  StepReport report{"myhits", pr.iterations, pr.residual, 0.0, {}};
  try {
    auto result = hits<double>(g, hits_options, w);
    authority = std::move(result.authority.values);
    hub = std::move(result.hub.values);
    report.residual = std::max(report.residual, result.authority.residual);
    report.iterations = std::max(report.iterations, result.authority.iterations);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroGraph) throw;
    authority = hub = Eigen::VectorXd::Constant(g.size(), 1.0 / std::sqrt(static_cast<double>(g.size())));
    report.note = "no edges; uniform fallback";
  }
  IndexStore::Transaction tx(store);
  write_scores(store, ScoreTable::AuthMyHits, g, authority, &w);
  write_scores(store, ScoreTable::HubMyHits, g, hub, &w);
  write_scores(store, ScoreTable::MyPageRank, g, pr.values, &w);
  tx.commit();
  report.seconds = seconds_since(start);
  return report;
}

}  // namespace anchorlight::links
