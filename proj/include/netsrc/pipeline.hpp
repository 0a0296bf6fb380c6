#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "netsrc/deconvolution.hpp"
#include "netsrc/graph.hpp"
#include "netsrc/noise.hpp"
#include "netsrc/signal.hpp"

namespace netsrc {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,          // unreadable or invalid input
  kExitPlacement = 3,       // strategic set / condition 3
  kExitWindow = 4,          // final-state window or rank
  kExitLocalization = 5,    // ambiguous source
  kExitReconstruction = 6,  // signal reconstruction
  kExitSimulation = 7,      // forward integration
};

// One experiment, all times in a single unit. Nodes are 0-based here and
// 1-based in the JSON document.
struct ExperimentConfig {
  std::filesystem::path base_dir;
  std::filesystem::path topology_path;
  std::optional<NetworkGraph> topology;  // inline topology
  int i = 0;
  int j = 1;
  std::optional<SourceSpec> source;  // synthesis only; identify never reads it
  std::optional<std::filesystem::path> records;
  std::optional<std::filesystem::path> truth;
  double T = 0.0;
  double T0 = 0.0;
  std::optional<double> T_star;
  int steps = 0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<int> ms = {1};
  int fourier_order = 7;
  double noise_level = 0.0;
  std::uint64_t seed = 0;
  NoiseReference noise_reference = NoiseReference::network_deviation;
  std::string method = "deconvolution";
  RegularizationMode mode = RegularizationMode::tikhonov;
  std::optional<double> r;
  std::optional<int> observation_node;
  std::optional<double> threshold;
  double rk_abs_tol = 1e-9;
  double rk_rel_tol = 1e-9;
  bool modal_oracle = false;
  std::filesystem::path output_dir = "out";

  bool noisy() const { return noise_level > 0; }
  NetworkGraph load_graph() const;
  std::filesystem::path records_path() const;
};

// Relative paths resolve against base_dir.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);
// Normalized document (1-based nodes) recorded in manifests.
nlohmann::json config_to_json(const ExperimentConfig& config);

struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::json report;
};

CommandResult run_analyze(const NetworkGraph& graph, int i, int j, int m, double T,
                          double cond_threshold = 1e12);
CommandResult run_simulate(const ExperimentConfig& config);
CommandResult run_identify(const ExperimentConfig& config);
// Synthesis configs are simulated then identified (truth wired from the
// simulation); configs run concurrently.
CommandResult run_batch(const std::vector<ExperimentConfig>& configs);

}  // namespace netsrc
