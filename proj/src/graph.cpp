#include "anchorlight/graph.hpp"

#include <algorithm>

namespace anchorlight::links {

Eigen::VectorXd WebGraph::out_degree() const {
  Eigen::VectorXd deg(size());
  for (Eigen::Index i = 0; i < adjacency.outerSize(); ++i)
    deg(i) = static_cast<double>(adjacency.outerIndexPtr()[i + 1] - adjacency.outerIndexPtr()[i]);
  return deg;
}

Eigen::VectorXd WebGraph::in_degree() const {
  Eigen::VectorXd deg = Eigen::VectorXd::Zero(size());
  for (Eigen::Index i = 0; i < adjacency.outerSize(); ++i)
    for (decltype(adjacency)::InnerIterator it(adjacency, i); it; ++it) deg(it.col()) += 1.0;
  return deg;
}

WebGraph WebGraph::transposed() const {
  WebGraph g;
  g.nodes = nodes;
  g.position = position;
  g.adjacency = adjacency.transpose();
  return g;
}

WebGraph make_graph(std::vector<PageId> nodes, std::span<const std::pair<PageId, PageId>> edges) {
  for (const auto& [from, to] : edges) {
    nodes.push_back(from);
    nodes.push_back(to);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  WebGraph g;
  g.nodes = std::move(nodes);
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    g.position.emplace(g.nodes[i], static_cast<Eigen::Index>(i));

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(edges.size());
  for (const auto& [from, to] : edges) {
    if (from == to) continue;
    triplets.emplace_back(g.position.at(from), g.position.at(to), 1.0);
  }
  g.adjacency.resize(g.size(), g.size());
  // Duplicates collapse to a single unit entry.
  g.adjacency.setFromTriplets(triplets.begin(), triplets.end(),
                              [](double, double) { return 1.0; });
  g.adjacency.makeCompressed();
  return g;
}

WebGraph build_graph(const IndexStore& store) {
  std::vector<std::pair<PageId, PageId>> edges;
  for (const auto& link : store.links()) edges.emplace_back(link.fromid, link.toid);
  return make_graph(store.pages(), edges);
}

}  // namespace anchorlight::links
