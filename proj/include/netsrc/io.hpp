#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "netsrc/adjoint.hpp"
#include "netsrc/final_state.hpp"
#include "netsrc/graph.hpp"
#include "netsrc/identifiability.hpp"
#include "netsrc/joints.hpp"
#include "netsrc/localizer.hpp"
#include "netsrc/simulation.hpp"
#include "netsrc/spectrum.hpp"

// File formats and JSON views. Every node number written here is 1-based.
namespace netsrc::io {

using nlohmann::json;

// Shortest round-trip decimal form; identical bytes for identical doubles.
std::string format_number(double x);

NetworkGraph topology_from_json(const json& doc);
json topology_to_json(const NetworkGraph& graph);
// JSON when the extension is .json, edge list otherwise.
NetworkGraph load_topology(const std::filesystem::path& path);

// Header t,x1,...,xN.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

// Header t,lambda.
void write_signal_csv(const std::filesystem::path& path, const std::vector<double>& times,
                      const std::vector<double>& values);
std::pair<std::vector<double>, std::vector<double>> read_signal_csv(
    const std::filesystem::path& path);

// Header t,lambda_true,lambda_identified (truth column omitted when absent).
void write_identified_csv(const std::filesystem::path& path, const std::vector<double>& times,
                          const std::optional<std::vector<double>>& truth,
                          const std::vector<double>& identified);

// Header l1,l2,xbar<k>...,diff_norm; unsolvable pairs leave the values empty.
void write_consistency_csv(const std::filesystem::path& path, const AdjointSystem& system,
                           const std::vector<PairRow>& rows);

void write_json(const std::filesystem::path& path, const json& doc);
json read_json(const std::filesystem::path& path);

json vector_json(const Vector& v);
json nodes_json(const std::vector<int>& nodes);  // 0-based in, 1-based out

json to_json(const StrategicReport& r);
json to_json(const JointReport& r);
json to_json(const Condition3Report& r);
json to_json(const FinalStateEstimate& e);
json to_json(const AdjointSystem& s);
json to_json(const LocalizationResult& r);
json to_json(const MultiLocalization& r);

}  // namespace netsrc::io
