#pragma once

#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netsrc/types.hpp"

namespace netsrc {

struct Edge {
  int u;
  int v;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Undirected simple graph on nodes 0..n-1.
class NetworkGraph {
 public:
  // Throws ValidationError naming the first bad edge (self-loop, duplicate,
  // endpoint out of range).
  NetworkGraph(int n_nodes, std::vector<Edge> edges);

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int node) const { return adjacency_[node]; }
  int degree(int node) const { return static_cast<int>(adjacency_[node].size()); }

  // Connected components after deleting `removed` nodes.
  int component_count(std::span<const int> removed = {}) const;
  bool connected() const { return component_count() == 1; }

  // Node p of this graph becomes node perm[p] of the result.
  NetworkGraph relabeled(std::span<const int> perm) const;

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

// Diagonal -degree, off-diagonal adjacency.
Matrix build_laplacian(const NetworkGraph& graph);

// Edge list text: one "u v" pair (1-based) per line, '#' comments allowed.
// Node count is the largest endpoint unless given.
NetworkGraph read_edge_list(std::istream& in, std::optional<int> n_nodes = {});

}  // namespace netsrc
