#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <functional>
#include <string>

#include "anchorlight/error.hpp"
#include "anchorlight/graph.hpp"

namespace anchorlight::links {

enum class ScoreKind { PageRank, Authority, Hub, Length };

template <typename Scalar = double>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Scores aligned with WebGraph::nodes.
template <typename Scalar = double>
struct ScoreVector {
  Vector<Scalar> values;
  ScoreKind kind = ScoreKind::PageRank;
  int iterations = 0;
  Scalar residual = 0;
};

/// Called once per iteration with the iteration number (1-based) and residual.
using ProgressFn = std::function<void(int iteration, double residual)>;

struct PageRankOptions {
  double damping = 0.85;
  int max_iterations = 50;
  double tolerance = 1e-8;
  ProgressFn progress;
};

struct HitsOptions {
  int max_iterations = 100;
  double tolerance = 1e-9;
  ProgressFn progress;
};

template <typename Scalar>
struct HitsResult {
  ScoreVector<Scalar> authority;
  ScoreVector<Scalar> hub;
};

/// Node weight from (indegree, outdegree); must be positive and finite.
using NodeWeightHook = std::function<double(long indegree, long outdegree)>;

inline NodeWeightHook unit_weight() {
  return [](long, long) { return 1.0; };
}

/// Evaluates the hook on every node; throws InvalidWeight for a non-positive
/// or non-finite value.
Eigen::VectorXd node_weights(const WebGraph& g, const NodeWeightHook& hook);

namespace detail {

template <typename Scalar>
using RowMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

// Row-stochastic transition matrix where q moves to p with probability
// weight(p) / sum of weights over q's out-links. Dangling rows stay empty.
template <typename Scalar>
RowMatrix<Scalar> transition(const WebGraph& g, const Vector<Scalar>& weights) {
  RowMatrix<Scalar> p = g.adjacency.template cast<Scalar>();
  for (Eigen::Index row = 0; row < p.outerSize(); ++row) {
    Scalar total = 0;
    for (typename RowMatrix<Scalar>::InnerIterator it(p, row); it; ++it) {
      it.valueRef() = weights(it.col());
      total += it.value();
    }
    for (typename RowMatrix<Scalar>::InnerIterator it(p, row); it; ++it) it.valueRef() /= total;
  }
  return p;
}

}  // namespace detail

/// Power iteration on PR(p) = (1-d)/N + d * sum_{q->p} PR(q) * T(q,p), where T
/// spreads q's rank over its out-links in proportion to the target weights
/// (uniformly when all weights are equal). Rank held by dangling nodes is
/// redistributed uniformly. Values sum to 1.
template <typename Scalar = double>
ScoreVector<Scalar> pagerank(const WebGraph& g, const PageRankOptions& options = {},
                             const Vector<Scalar>& weights = {}) {
  const Eigen::Index n = g.size();
  if (n == 0) throw Error(ErrorCode::EmptyGraph, "pagerank on an empty graph");
  Vector<Scalar> w = weights.size() == n ? weights : Vector<Scalar>::Ones(n);
  const detail::RowMatrix<Scalar> transitions = detail::transition<Scalar>(g, w);
  const Eigen::SparseMatrix<Scalar> pull = transitions.transpose();

  Vector<Scalar> dangling(n);
  for (Eigen::Index i = 0; i < n; ++i)
    dangling(i) = transitions.outerIndexPtr()[i + 1] == transitions.outerIndexPtr()[i] ? 1 : 0;

  const Scalar d = static_cast<Scalar>(options.damping);
  const Scalar inv_n = Scalar(1) / static_cast<Scalar>(n);
  ScoreVector<Scalar> out;
  out.kind = ScoreKind::PageRank;
  out.values = Vector<Scalar>::Constant(n, inv_n);
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    const Scalar dangling_mass = dangling.dot(out.values);
    Vector<Scalar> next = (d * (pull * out.values)).array() + (Scalar(1) - d) * inv_n + d * dangling_mass * inv_n;
    next /= next.sum();  // guards rounding drift
    out.residual = (next - out.values).template lpNorm<1>();
    out.values = std::move(next);
    out.iterations = iter;
    if (options.progress) options.progress(iter, static_cast<double>(out.residual));
    if (out.residual < options.tolerance) break;
  }
  return out;
}

/// Global (query-independent) HITS over the whole graph:
/// authority <- D A^T hub, hub <- D A authority, each scaled to unit Euclidean
/// norm every step, with D the diagonal node weights (identity by default).
/// Throws ZeroGraph when the graph has no edges.
template <typename Scalar = double>
HitsResult<Scalar> hits(const WebGraph& g, const HitsOptions& options = {},
                        const Vector<Scalar>& weights = {}) {
  const Eigen::Index n = g.size();
  if (n == 0) throw Error(ErrorCode::EmptyGraph, "hits on an empty graph");
  if (g.edge_count() == 0) throw Error(ErrorCode::ZeroGraph, "hits on a graph with no edges");
  Vector<Scalar> w = weights.size() == n ? weights : Vector<Scalar>::Ones(n);
  const detail::RowMatrix<Scalar> forward = g.adjacency.template cast<Scalar>();
  const Eigen::SparseMatrix<Scalar> backward = forward.transpose();

  HitsResult<Scalar> out;
  out.authority.kind = ScoreKind::Authority;
  out.hub.kind = ScoreKind::Hub;
  Vector<Scalar> hub = Vector<Scalar>::Constant(n, Scalar(1) / std::sqrt(static_cast<Scalar>(n)));
  Vector<Scalar> authority = Vector<Scalar>::Zero(n);
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    Vector<Scalar> next_authority = w.cwiseProduct(backward * hub);
    next_authority.normalize();
    Vector<Scalar> next_hub = w.cwiseProduct(forward * next_authority);
    next_hub.normalize();
    Scalar residual = std::max((next_authority - authority).norm(), (next_hub - hub).norm());
    authority = std::move(next_authority);
    hub = std::move(next_hub);
    out.authority.iterations = out.hub.iterations = iter;
    out.authority.residual = out.hub.residual = residual;
    if (options.progress) options.progress(iter, static_cast<double>(residual));
    if (residual < options.tolerance) break;
  }
  out.authority.values = std::move(authority);
  out.hub.values = std::move(hub);
  return out;
}

/// Step summary from an analysis pass.
struct StepReport {
  std::string name;
  int iterations = 0;
  double residual = 0.0;
  double seconds = 0.0;
  std::string note;
};

/// pagelength row per indexed page = number of postings.
StepReport compute_page_lengths(IndexStore& store);
/// Writes `pagerank`.
StepReport compute_pagerank(IndexStore& store, const WebGraph& g, const PageRankOptions& options = {});
/// Writes `auth_hits` and `hub_hits`. A graph without edges stores the uniform
/// unit vector 1/sqrt(N) and notes it.
StepReport compute_hits_global(IndexStore& store, const WebGraph& g, const HitsOptions& options = {});
/// Writes `auth_myhits`, `hub_myhits`, `mypagerank`, each with constant = hook(indeg, outdeg).
StepReport compute_weighted_variants(IndexStore& store, const WebGraph& g, const NodeWeightHook& hook,
                                     const PageRankOptions& pr_options = {},
                                     const HitsOptions& hits_options = {});

}  // namespace anchorlight::links
