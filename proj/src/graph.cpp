#include "netsrc/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

#include "netsrc/errors.hpp"

namespace netsrc {

namespace {

std::string edge_name(const Edge& e) {
  std::ostringstream os;
  os << "(" << e.u + 1 << "," << e.v + 1 << ")";
  return os.str();
}

}  // namespace

NetworkGraph::NetworkGraph(int n_nodes, std::vector<Edge> edges)
    : n_(n_nodes), edges_(std::move(edges)), adjacency_(n_nodes > 0 ? n_nodes : 0) {
  if (n_nodes <= 0) throw ValidationError("graph needs at least one node");
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges_) {
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
      throw ValidationError("edge " + edge_name(e) + " has an endpoint outside 1.." +
                            std::to_string(n_));
    if (e.u == e.v) throw ValidationError("edge " + edge_name(e) + " is a self-loop");
    auto key = std::minmax(e.u, e.v);
    if (!seen.insert({key.first, key.second}).second)
      throw ValidationError("edge " + edge_name(e) + " is a duplicate");
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

int NetworkGraph::component_count(std::span<const int> removed) const {
  std::vector<char> skip(n_, 0), seen(n_, 0);
  for (int r : removed) skip[r] = 1;
  int count = 0;
  std::vector<int> stack;
  for (int start = 0; start < n_; ++start) {
    if (skip[start] || seen[start]) continue;
    ++count;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : adjacency_[u]) {
        if (!skip[w] && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
  }
  return count;
}

NetworkGraph NetworkGraph::relabeled(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != n_)
    throw ValidationError("permutation size does not match the graph");
  std::vector<Edge> mapped;
  mapped.reserve(edges_.size());
  for (const Edge& e : edges_) mapped.push_back({perm[e.u], perm[e.v]});
  return NetworkGraph(n_, std::move(mapped));
}

Matrix build_laplacian(const NetworkGraph& graph) {
  const int n = graph.size();
  Matrix L = Matrix::Zero(n, n);
  for (const Edge& e : graph.edges()) {
    L(e.u, e.v) = 1.0;
    L(e.v, e.u) = 1.0;
  }
  for (int k = 0; k < n; ++k) L(k, k) = -static_cast<double>(graph.degree(k));
  return L;
}

NetworkGraph read_edge_list(std::istream& in, std::optional<int> n_nodes) {
  std::vector<Edge> edges;
  int largest = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    int u = 0, v = 0;
    if (!(ls >> u)) continue;
    if (!(ls >> v))
      throw ValidationError("edge list line " + std::to_string(line_no) +
                            ": expected two node numbers");
    std::string extra;
    if (ls >> extra)
      throw ValidationError("edge list line " + std::to_string(line_no) +
                            ": trailing text '" + extra + "'");
    largest = std::max({largest, u, v});
    edges.push_back({u - 1, v - 1});
  }
  return NetworkGraph(n_nodes.value_or(largest), std::move(edges));
}

}  // namespace netsrc
