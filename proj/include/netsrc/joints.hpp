#pragma once

#include <vector>

#include "netsrc/graph.hpp"

namespace netsrc {

struct JointReport {
  std::vector<int> joints;                                // sorted
  std::vector<std::vector<Edge>> biconnected_components;  // edge sets
  // Smallest non-joint node of each biconnected component, sorted and
  // deduplicated; components made only of joints contribute nothing.
  std::vector<int> sensor_recommendation;
};

// Tarjan's low-link traversal, iterative, O(n + edges). Disconnected graphs
// are handled component by component; isolated nodes form no component.
JointReport find_joints(const NetworkGraph& graph);

}  // namespace netsrc
