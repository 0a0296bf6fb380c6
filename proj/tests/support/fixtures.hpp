#pragma once

#include <random>

#include "netsrc/graph.hpp"
#include "netsrc/signal.hpp"
#include "netsrc/simulation.hpp"
#include "netsrc/spectrum.hpp"

namespace netsrc::testing {

// Five-node reference network with Laplacian diagonal (-2,-3,-2,-4,-3).
NetworkGraph five_node_graph();
// Two triangles sharing node 4.
NetworkGraph bowtie_graph();
// Blocks {1..4} and {6..9} hanging off joint 5.
NetworkGraph nine_node_joint_graph();
// Bridges 1-3, 2-3, 3-4, 4-5, 4-6.
NetworkGraph bridge_star_graph();

// Random connected simple graph: a random spanning tree plus extra edges.
NetworkGraph random_connected_graph(std::mt19937_64& rng, int n, double extra_edge_prob);

// tanh pulse with beta, t_left = 0.3T, t_right = 0.6T, width = 0.01T, cut at T0.
SignalSpec pulse_signal(double beta, double T, double T0);
// The three long-horizon signals (0: pulse, 1: half sine, 2: gaussian sum).
SignalSpec long_signal(int which);

struct Fixture {
  NetworkGraph graph;
  Matrix laplacian;
  LaplacianSpectrum spectrum;
  SourceSpec source;
  SimulationConfig config;
  Trajectory traj;
};

Fixture make_fixture(const NetworkGraph& graph, const SourceSpec& source,
                     const SimulationConfig& config, bool modal);

// T = 100, steps = 100, T0 = 70, beta = 3, zero initial data; RK at 1e-11.
const Fixture& short_fixture(int source_node = 2);

// T = 14400, T0 = 10800, steps = 14400 with fixed source and observer pairings
// (pulse at node 3, half sine at node 2, gaussian sum at node 1).
const Fixture& long_fixture(int which);
int long_source(int which);
int long_observer(int which);

}  // namespace netsrc::testing
