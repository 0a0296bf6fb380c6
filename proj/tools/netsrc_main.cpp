// netsrc: placement analysis, synthesis and blind identification of a
// single forcing source on a network wave model.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netsrc/errors.hpp"
#include "netsrc/io.hpp"
#include "netsrc/pipeline.hpp"

namespace {

using nlohmann::json;

struct Overrides {
  std::optional<std::string> topology, records, truth, method, mode, out_dir, noise_reference;
  std::optional<int> i, j, steps, fourier_order, observation_node;
  std::optional<double> T, T0, T_star, noise, r, threshold;
  std::optional<std::uint64_t> seed;
  std::vector<int> ms;
  bool modal_oracle = false;
};

void add_override_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--topology", o.topology, "Topology file (JSON or edge list)");
  cmd->add_option("--i", o.i, "First observation node (1-based)");
  cmd->add_option("--j", o.j, "Second observation node (1-based)");
  cmd->add_option("--T", o.T, "Horizon");
  cmd->add_option("--T0", o.T0, "Source cut-off time");
  cmd->add_option("--T-star", o.T_star, "Start of the final-state fit window");
  cmd->add_option("--steps", o.steps, "Number of time steps");
  cmd->add_option("--m", o.ms, "Adjoint index (repeat for a majority vote)");
  cmd->add_option("--fourier-order", o.fourier_order, "Fourier order M");
  cmd->add_option("--noise", o.noise, "Noise level (fraction)");
  cmd->add_option("--noise-reference", o.noise_reference,
                  "network_deviation or peak_amplitude");
  cmd->add_option("--seed", o.seed, "Noise seed");
  cmd->add_option("--method", o.method, "deconvolution or fourier");
  cmd->add_option("--mode", o.mode, "tikhonov or diagonal_shift");
  cmd->add_option("--r", o.r, "Regularization parameter");
  cmd->add_option("--threshold", o.threshold, "Localization threshold (relative)");
  cmd->add_option("--observation-node", o.observation_node, "Node used for deconvolution");
  cmd->add_option("--records", o.records, "Trajectory CSV to identify from");
  cmd->add_option("--truth", o.truth, "Signal CSV with the true source signal");
  cmd->add_option("--out-dir", o.out_dir, "Output directory");
  cmd->add_flag("--modal-oracle", o.modal_oracle, "Also write the modal-solver trajectory");
}

// Flags land in the JSON document before parsing, so one validator applies.
void apply_overrides(json& doc, const Overrides& o) {
  if (o.topology) doc["topology"] = *o.topology;
  if (o.i || o.j) {
    json obs = doc.value("observation", json::array({1, 2}));
    if (o.i) obs[0] = *o.i;
    if (o.j) obs[1] = *o.j;
    doc["observation"] = obs;
  }
  if (o.T) doc["time"]["T"] = *o.T;
  if (o.T0) doc["time"]["T0"] = *o.T0;
  if (o.T_star) doc["time"]["T_star"] = *o.T_star;
  if (o.steps) doc["time"]["steps"] = *o.steps;
  if (!o.ms.empty()) doc["adjoint"]["m"] = o.ms;
  if (o.fourier_order) doc["adjoint"]["fourier_order"] = *o.fourier_order;
  if (o.noise) doc["noise"]["level"] = *o.noise;
  if (o.noise_reference) doc["noise"]["reference"] = *o.noise_reference;
  if (o.seed) doc["noise"]["seed"] = *o.seed;
  if (o.method) doc["reconstruction"]["method"] = *o.method;
  if (o.mode) doc["reconstruction"]["mode"] = *o.mode;
  if (o.r) doc["reconstruction"]["r"] = *o.r;
  if (o.observation_node) doc["reconstruction"]["observation_node"] = *o.observation_node;
  if (o.threshold) doc["localization"]["threshold"] = *o.threshold;
  if (o.records) doc["records"] = *o.records;
  if (o.truth) doc["truth"] = *o.truth;
  if (o.out_dir) doc["output_dir"] = *o.out_dir;
  if (o.modal_oracle) doc["modal_oracle"] = true;
}

// Paths given on the command line are relative to the working directory,
// paths inside the file to the file's directory.
netsrc::ExperimentConfig build_config(const std::string& path, const Overrides& o) {
  json doc = path.empty() ? json::object() : netsrc::io::read_json(path);
  const std::filesystem::path base =
      path.empty() ? std::filesystem::path(".") : std::filesystem::path(path).parent_path();
  Overrides rel = o;
  auto absolute = [](std::optional<std::string>& p) {
    if (p) p = std::filesystem::absolute(*p).string();
  };
  absolute(rel.topology);
  absolute(rel.records);
  absolute(rel.truth);
  absolute(rel.out_dir);
  apply_overrides(doc, rel);
  return netsrc::parse_config(doc, base.empty() ? "." : base);
}

int emit(const netsrc::CommandResult& res) {
  std::cout << res.report.dump(2) << std::endl;
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Source localization and signal identification on networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(NETSRC_VERSION));

  auto* analyze = app.add_subcommand("analyze", "Check an observation pair for identifiability");
  std::string topo;
  int ai = 1, aj = 2, am = 1;
  double aT = 1.0, cond = 1e12;
  std::string report_path;
  analyze->add_option("--topology", topo, "Topology file (JSON or edge list)")->required();
  analyze->add_option("--i", ai, "First observation node (1-based)")->required();
  analyze->add_option("--j", aj, "Second observation node (1-based)")->required();
  analyze->add_option("--m", am, "Adjoint index");
  analyze->add_option("--T", aT, "Horizon")->required();
  analyze->add_option("--cond-threshold", cond, "Condition number treated as singular");
  analyze->add_option("--out", report_path, "Also write the report to this file");

  Overrides sim_o, id_o;
  std::string sim_cfg, id_cfg;
  auto* simulate = app.add_subcommand("simulate", "Synthesize records from a source config");
  simulate->add_option("--config", sim_cfg, "Experiment config (JSON)");
  add_override_flags(simulate, sim_o);

  auto* identify = app.add_subcommand("identify", "Localize the source and reconstruct its signal");
  identify->add_option("--config", id_cfg, "Experiment config (JSON)");
  add_override_flags(identify, id_o);

  std::vector<std::string> batch_cfgs;
  auto* batch = app.add_subcommand("batch", "Run several configs concurrently");
  batch->add_option("configs", batch_cfgs, "Experiment configs (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      auto graph = netsrc::io::load_topology(topo);
      auto res = netsrc::run_analyze(graph, ai - 1, aj - 1, am, aT, cond);
      if (!report_path.empty()) netsrc::io::write_json(report_path, res.report);
      return emit(res);
    }
    if (simulate->parsed()) return emit(netsrc::run_simulate(build_config(sim_cfg, sim_o)));
    if (identify->parsed()) return emit(netsrc::run_identify(build_config(id_cfg, id_o)));
    if (batch->parsed()) {
      std::vector<netsrc::ExperimentConfig> configs;
      for (const auto& path : batch_cfgs) configs.push_back(netsrc::load_config(path));
      return emit(netsrc::run_batch(configs));
    }
  } catch (const netsrc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return netsrc::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return netsrc::kExitConfig;
  }
  return netsrc::kExitConfig;
}
