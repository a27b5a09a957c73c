#include "oracles.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace anchorlight::testing {

namespace {

EdgeList cycle(int n, int offset = 0) {
  EdgeList e;
  for (int i = 0; i < n; ++i) e.emplace_back(offset + i, offset + (i + 1) % n);
  return e;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

EdgeList random_edges(int n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  EdgeList e;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && coin(rng) < p) e.emplace_back(i, j);
  return e;
}

std::vector<NamedGraph> small_graph_suite() {
  std::vector<NamedGraph> g;
  g.push_back({"single node", 1, {}});
  g.push_back({"two-cycle", 2, {{0, 1}, {1, 0}}});
  g.push_back({"chain of three", 3, {{0, 1}, {1, 2}}});
  g.push_back({"in-star", 3, {{0, 2}, {1, 2}}});
  g.push_back({"out-star", 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}});
  {
    NamedGraph k{"clique of four", 4, {}};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) k.edges.emplace_back(i, j);
    g.push_back(k);
  }
  g.push_back({"five-cycle", 5, cycle(5)});
  {
    NamedGraph two{"two disjoint cycles", 7, cycle(3)};
    for (auto e : cycle(4, 3)) two.edges.push_back(e);
    g.push_back(two);
  }
  g.push_back({"no edges", 4, {}});
  {
    NamedGraph b{"complete bipartite 3x3", 6, {}};
    for (int i = 0; i < 3; ++i)
      for (int j = 3; j < 6; ++j) b.edges.emplace_back(i, j);
    g.push_back(b);
  }
  g.push_back({"binary tree", 7, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}}});
  g.push_back({"tree with back edges", 7, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}, {3, 0}, {5, 0}, {6, 2}}});
  g.push_back({"duplicates and self-loops", 6,
               {{0, 1}, {0, 1}, {1, 0}, {0, 0}, {2, 2}, {2, 3}, {3, 4}, {3, 4}, {4, 5}, {5, 3}, {5, 5}}});
  g.push_back({"dangling chain into cycle", 8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 3}, {6, 7}}});
  {
    NamedGraph w{"wheel", 8, cycle(7, 1)};
    for (int i = 1; i < 8; ++i) w.edges.emplace_back(0, i);
    w.edges.emplace_back(3, 0);
    g.push_back(w);
  }
  {
    NamedGraph dag{"layered dag", 9, {}};
    for (int i = 0; i < 3; ++i)
      for (int j = 3; j < 6; ++j)
        if ((i + j) % 2 == 0 || j == 3) dag.edges.emplace_back(i, j);
    for (int i = 3; i < 6; ++i)
      for (int j = 6; j < 9; ++j)
        if ((i * j) % 3 != 1) dag.edges.emplace_back(i, j);
    g.push_back(dag);
  }
  g.push_back({"random n=10 p=0.25", 10, random_edges(10, 0.25, 10)});
  g.push_back({"random n=12 p=0.2", 12, random_edges(12, 0.2, 1)});
  g.push_back({"random n=10 p=0.3", 10, random_edges(10, 0.3, 2)});
  g.push_back({"random n=12 p=0.5", 12, random_edges(12, 0.5, 3)});
  g.push_back({"random n=11 p=0.15", 11, random_edges(11, 0.15, 4)});
  g.push_back({"random n=9 p=0.35", 9, random_edges(9, 0.35, 5)});
  return g;
}

links::WebGraph to_webgraph(int n, const EdgeList& edges) {
  std::vector<PageId> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back(PageId{i + 1});
  std::vector<std::pair<PageId, PageId>> e;
  for (auto [a, b] : edges) e.emplace_back(PageId{a + 1}, PageId{b + 1});
  return links::make_graph(std::move(nodes), e);
}

std::vector<std::vector<int>> dense_adjacency(int n, const EdgeList& edges) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  for (auto [a, b] : edges)
    if (a != b) adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
  return adj;
}

DenseResult dense_pagerank(const std::vector<std::vector<int>>& adj, double d, int max_iterations, double tol,
                           const std::vector<double>& weights) {
  const std::size_t n = adj.size();
  std::vector<double> w = weights.empty() ? std::vector<double>(n, 1.0) : weights;
  std::vector<double> pr(n, 1.0 / static_cast<double>(n));
  DenseResult out;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    std::vector<double> next(n, (1.0 - d) / static_cast<double>(n));
    double dangling = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      double total = 0.0;
      for (std::size_t p = 0; p < n; ++p)
        if (adj[q][p]) total += w[p];
      if (total == 0.0) {
        dangling += pr[q];
        continue;
      }
      for (std::size_t p = 0; p < n; ++p)
        if (adj[q][p]) next[p] += d * pr[q] * w[p] / total;
    }
    for (std::size_t p = 0; p < n; ++p) next[p] += d * dangling / static_cast<double>(n);
    double sum = 0.0;
    for (double v : next) sum += v;
    double residual = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      next[p] /= sum;
      residual += std::abs(next[p] - pr[p]);
    }
    pr = next;
    out.iterations = iter;
    if (residual < tol) break;
  }
  out.values = pr;
  return out;
}

DenseHits dense_hits(const std::vector<std::vector<int>>& adj, int max_iterations, double tol,
                     const std::vector<double>& weights) {
  const std::size_t n = adj.size();
  std::vector<double> w = weights.empty() ? std::vector<double>(n, 1.0) : weights;
  std::vector<double> hub(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> auth(n, 0.0);
  DenseHits out;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    std::vector<double> a(n, 0.0), h(n, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = 0; q < n; ++q)
        if (adj[q][p]) a[p] += hub[q];
      a[p] *= w[p];
    }
    double na = norm2(a);
    for (double& x : a) x /= na;
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t p = 0; p < n; ++p)
        if (adj[q][p]) h[q] += a[p];
      h[q] *= w[q];
    }
    double nh = norm2(h);
    for (double& x : h) x /= nh;
    double ra = 0.0, rh = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ra += (a[i] - auth[i]) * (a[i] - auth[i]);
      rh += (h[i] - hub[i]) * (h[i] - hub[i]);
    }
    auth = a;
    hub = h;
    out.iterations = iter;
    if (std::max(std::sqrt(ra), std::sqrt(rh)) < tol) break;
  }
  out.authority = auth;
  out.hub = hub;
  return out;
}

std::vector<double> exact_pagerank(const std::vector<std::vector<int>>& adj, double d) {
  const Eigen::Index n = static_cast<Eigen::Index>(adj.size());
  // x = d (P^T x + (dangling . x) / N) + (1 - d) / N, with sum(x) = 1.
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index q = 0; q < n; ++q) {
    double out = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) out += adj[q][p];
    for (Eigen::Index p = 0; p < n; ++p) {
      double step = out > 0.0 ? adj[q][p] / out : 1.0 / static_cast<double>(n);
      m(p, q) -= d * step;
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Constant(n, (1.0 - d) / static_cast<double>(n));
  Eigen::VectorXd x = m.fullPivLu().solve(rhs);
  x /= x.sum();
  return {x.data(), x.data() + n};
}

Eigenpair dominant_eigenvector(const std::vector<std::vector<double>>& symmetric) {
  const Eigen::Index n = static_cast<Eigen::Index>(symmetric.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = symmetric[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  const auto& values = solver.eigenvalues();  // ascending
  Eigen::VectorXd v = solver.eigenvectors().col(n - 1);
  if (v.sum() < 0) v = -v;
  Eigenpair out;
  out.vector.assign(v.data(), v.data() + n);
  double top = values(n - 1);
  double second = n > 1 ? std::max(std::abs(values(n - 2)), std::abs(values(0))) : 0.0;
  out.gap_ratio = top > 0.0 ? second / top : 1.0;
  return out;
}

std::vector<std::vector<double>> ata(const std::vector<std::vector<int>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) m[i][j] += adj[k][i] * adj[k][j];
  return m;
}

std::vector<std::vector<double>> aat(const std::vector<std::vector<int>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) m[i][j] += adj[i][k] * adj[j][k];
  return m;
}

}  // namespace anchorlight::testing
