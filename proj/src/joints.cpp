#include "netsrc/joints.hpp"

#include <algorithm>
#include <set>

namespace netsrc {

namespace {

struct Frame {
  int node;
  int parent;
  std::size_t next;
  int children;
};

}  // namespace

JointReport find_joints(const NetworkGraph& graph) {
  const int n = graph.size();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<char> is_joint(n, 0);
  std::vector<Edge> edge_stack;
  std::vector<Frame> stack;
  JointReport report;
  int clock = 0;

  auto close_component = [&](int u, int w) {
    std::vector<Edge> comp;
    while (!edge_stack.empty()) {
      Edge e = edge_stack.back();
      edge_stack.pop_back();
      comp.push_back(e);
      if (e.u == u && e.v == w) break;
    }
    report.biconnected_components.push_back(std::move(comp));
  };

  for (int root = 0; root < n; ++root) {
    if (disc[root] != -1) continue;
    disc[root] = low[root] = clock++;
    stack.push_back({root, -1, 0, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      const int u = f.node;
      const auto& nb = graph.neighbors(u);
      if (f.next < nb.size()) {
        const int w = nb[f.next++];
        if (disc[w] == -1) {
          edge_stack.push_back({u, w});
          ++f.children;
          disc[w] = low[w] = clock++;
          stack.push_back({w, u, 0, 0});
        } else if (w != f.parent && disc[w] < disc[u]) {
          edge_stack.push_back({u, w});
          low[u] = std::min(low[u], disc[w]);
        }
        continue;
      }
      const Frame done = f;
      const int child = done.node;
      stack.pop_back();
      if (stack.empty()) {
        if (done.children >= 2) is_joint[child] = 1;
        continue;
      }
      Frame& up = stack.back();
      const int p = up.node;
      low[p] = std::min(low[p], low[child]);
      if (low[child] >= disc[p]) {
        if (up.parent != -1) is_joint[p] = 1;
        close_component(p, child);
      }
    }
  }
  for (int k = 0; k < n; ++k)
    if (is_joint[k]) report.joints.push_back(k);

  std::set<int> recommended;
  for (auto& comp : report.biconnected_components) {
    int best = -1;
    for (const Edge& e : comp) {
      for (int x : {e.u, e.v})
        if (!is_joint[x] && (best == -1 || x < best)) best = x;
    }
    if (best != -1) recommended.insert(best);
    for (Edge& e : comp)
      if (e.u > e.v) std::swap(e.u, e.v);
    std::sort(comp.begin(), comp.end(), [](const Edge& a, const Edge& b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
  }
  report.sensor_recommendation.assign(recommended.begin(), recommended.end());
  return report;
}

}  // namespace netsrc
