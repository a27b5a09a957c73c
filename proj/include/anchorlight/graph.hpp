#pragma once

#include <Eigen/SparseCore>

#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "anchorlight/store.hpp"

namespace anchorlight::links {

/// Directed web graph over a dense node numbering 0..N-1.
/// adjacency(i, j) == 1 iff node i links to node j.
struct WebGraph {
  std::vector<PageId> nodes;  // ascending
  std::unordered_map<PageId, Eigen::Index, IdHash> position;
  Eigen::SparseMatrix<double, Eigen::RowMajor> adjacency;

  Eigen::Index size() const { return static_cast<Eigen::Index>(nodes.size()); }
  Eigen::Index edge_count() const { return adjacency.nonZeros(); }
  Eigen::VectorXd out_degree() const;
  Eigen::VectorXd in_degree() const;
  WebGraph transposed() const;
};

/// Collapses repeated edges and drops self-loops. Edge endpoints missing from
/// `nodes` are added.
WebGraph make_graph(std::vector<PageId> nodes, std::span<const std::pair<PageId, PageId>> edges);

/// Graph over every urllist page, edges from the link table.
WebGraph build_graph(const IndexStore& store);

}  // namespace anchorlight::links
