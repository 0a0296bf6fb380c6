#include "fixtures.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

namespace netsrc::testing {

namespace {

NetworkGraph from_one_based(int n, std::initializer_list<std::pair<int, int>> edges) {
  std::vector<Edge> out;
  for (auto [u, v] : edges) out.push_back({u - 1, v - 1});
  return NetworkGraph(n, std::move(out));
}

}  // namespace

NetworkGraph five_node_graph() {
  return from_one_based(5, {{1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5}, {3, 4}, {4, 5}});
}

NetworkGraph bowtie_graph() {
  return from_one_based(5, {{1, 2}, {1, 4}, {2, 4}, {3, 4}, {3, 5}, {4, 5}});
}

NetworkGraph nine_node_joint_graph() {
  return from_one_based(9, {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {1, 3}, {3, 5}, {4, 5},
                            {5, 6}, {5, 7}, {6, 7}, {7, 8}, {8, 9}, {9, 6}, {6, 8}});
}

NetworkGraph bridge_star_graph() {
  return from_one_based(6, {{1, 3}, {2, 3}, {3, 4}, {4, 5}, {4, 6}});
}

NetworkGraph random_connected_graph(std::mt19937_64& rng, int n, double extra_edge_prob) {
  std::vector<int> order(n);
  for (int k = 0; k < n; ++k) order[k] = k;
  std::shuffle(order.begin(), order.end(), rng);
  std::set<std::pair<int, int>> edges;
  for (int k = 1; k < n; ++k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    int a = order[k], b = order[pick(rng)];
    edges.insert({std::min(a, b), std::max(a, b)});
  }
  std::bernoulli_distribution extra(extra_edge_prob);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (extra(rng)) edges.insert({a, b});
  std::vector<Edge> out;
  for (auto [a, b] : edges) out.push_back({a, b});
  return NetworkGraph(n, std::move(out));
}

SignalSpec pulse_signal(double beta, double T, double T0) {
  return SignalSpec(TanhPulse{beta, 0.3 * T, 0.6 * T, 0.01 * T}, T0);
}

SignalSpec long_signal(int which) {
  const double T = 14400, T0 = 10800;
  switch (which) {
    case 0:
      return pulse_signal(2.0, T, T0);
    case 1:
      return SignalSpec(HalfSine{}, T0);
    default:
      return SignalSpec(GaussianSum{{1.2, 0.4, 0.6}, {1e-6, 5e-5, 1e-6}, {4500, 6500, 8500}}, T0);
  }
}

int long_source(int which) { return which == 0 ? 2 : which == 1 ? 1 : 0; }
int long_observer(int which) { return which == 0 ? 0 : which == 1 ? 4 : 2; }

Fixture make_fixture(const NetworkGraph& graph, const SourceSpec& source,
                     const SimulationConfig& config, bool modal) {
  Fixture f{graph, build_laplacian(graph), {}, source, config, {}};
  f.spectrum = spectral_decompose(f.laplacian);
  f.traj = modal ? simulate_modal(f.spectrum, source, config)
                 : simulate_rk(f.laplacian, source, config);
  return f;
}

const Fixture& short_fixture(int source_node) {
  static std::mutex mu;
  static std::map<int, Fixture> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(source_node);
  if (it == cache.end()) {
    SimulationConfig cfg;
    cfg.T = 100;
    cfg.steps = 100;
    cfg.abs_tol = 1e-11;
    cfg.rel_tol = 1e-11;
    SourceSpec src{source_node, pulse_signal(3.0, 100, 70)};
    it = cache.emplace(source_node, make_fixture(five_node_graph(), src, cfg, false)).first;
  }
  return it->second;
}

const Fixture& long_fixture(int which) {
  static std::mutex mu;
  static std::map<int, Fixture> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(which);
  if (it == cache.end()) {
    SimulationConfig cfg;
    cfg.T = 14400;
    cfg.steps = 14400;
    SourceSpec src{long_source(which), long_signal(which)};
    it = cache.emplace(which, make_fixture(five_node_graph(), src, cfg, true)).first;
  }
  return it->second;
}

}  // namespace netsrc::testing
