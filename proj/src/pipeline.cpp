#include "netsrc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "netsrc/adjoint.hpp"
#include "netsrc/errors.hpp"
#include "netsrc/final_state.hpp"
#include "netsrc/fourier.hpp"
#include "netsrc/identifiability.hpp"
#include "netsrc/io.hpp"
#include "netsrc/joints.hpp"
#include "netsrc/localizer.hpp"
#include "netsrc/phi_kernel.hpp"
#include "netsrc/simulation.hpp"
#include "netsrc/spectrum.hpp"

namespace netsrc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kTopLevelKeys = {
    "topology", "observation", "time",     "initial",      "source",        "records",
    "truth",    "adjoint",     "noise",    "reconstruction", "localization", "rk",
    "modal_oracle", "output_dir"};

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path x(p);
  return x.is_absolute() ? x : base / x;
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  return obj.contains(key) && !obj.at(key).is_null() ? obj.at(key).get<T>() : fallback;
}

SignalSpec parse_signal(const json& doc, double cut, const fs::path& base) {
  const std::string type = doc.at("type").get<std::string>();
  if (type == "tanh_pulse") {
    return SignalSpec(TanhPulse{doc.at("beta").get<double>(), doc.at("t_left").get<double>(),
                                doc.at("t_right").get<double>(), doc.at("width").get<double>()},
                      cut);
  }
  if (type == "half_sine") return SignalSpec(HalfSine{}, cut);
  if (type == "gaussian_sum") {
    return SignalSpec(GaussianSum{doc.at("c").get<std::vector<double>>(),
                                  doc.at("alpha").get<std::vector<double>>(),
                                  doc.at("tau").get<std::vector<double>>()},
                      cut);
  }
  if (type == "tabulated") {
    Tabulated tab;
    if (doc.contains("file")) {
      auto [t, v] = io::read_signal_csv(resolve(base, doc.at("file").get<std::string>()));
      tab.times = std::move(t);
      tab.values = std::move(v);
    } else {
      tab.times = doc.at("times").get<std::vector<double>>();
      tab.values = doc.at("values").get<std::vector<double>>();
    }
    return SignalSpec(std::move(tab), cut);
  }
  throw ValidationError("unknown signal type '" + type + "'");
}

json signal_to_json(const SignalSpec& s) {
  json doc = {{"type", s.kind()}};
  if (auto* p = std::get_if<TanhPulse>(&s.shape())) {
    doc["beta"] = p->beta;
    doc["t_left"] = p->t_left;
    doc["t_right"] = p->t_right;
    doc["width"] = p->width;
  } else if (auto* g = std::get_if<GaussianSum>(&s.shape())) {
    doc["c"] = g->c;
    doc["alpha"] = g->alpha;
    doc["tau"] = g->tau;
  } else if (auto* t = std::get_if<Tabulated>(&s.shape())) {
    doc["times"] = t->times;
    doc["values"] = t->values;
  }
  return doc;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json file_entry(const fs::path& dir, const std::string& name, const std::string& role) {
  return {{"path", name}, {"role", role}, {"bytes", fs::file_size(dir / name)}};
}

json manifest(const ExperimentConfig& config, const std::string& command, const json& files) {
  return {{"tool", "netsrc"},
          {"version", NETSRC_VERSION},
          {"command", command},
          {"seed", config.seed},
          {"config", config_to_json(config)},
          {"files", files}};
}

CommandResult failure(int code, const std::string& stage, const std::string& message,
                      json report = json::object()) {
  report["status"] = "failed";
  report["stage"] = stage;
  report["error"] = message;
  return {code, std::move(report)};
}

json placement_report(const NetworkGraph& graph, const LaplacianSpectrum& spectrum, int i,
                      int j, const std::vector<int>& ms, double T, double cond_threshold,
                      bool& pass, std::vector<std::string>& violations) {
  const Matrix L = build_laplacian(graph);
  const std::vector<int> obs = {i, j};
  const StrategicReport strategic = is_strategic_set(spectrum, obs);
  const JointReport joints = find_joints(graph);
  json cond3 = json::array();
  pass = strategic.is_strategic;
  if (!strategic.is_strategic) violations.push_back("observation set is not strategic");
  bool cond_ok = true;
  for (int m : ms) {
    auto rep = check_identifiability_condition3(L, m, T, i, j, cond_threshold);
    cond_ok = cond_ok && rep.pass;
    cond3.push_back(io::to_json(rep));
  }
  if (!cond_ok) violations.push_back("condition 3: singular reduced submatrices");
  bool covered = true;
  for (const auto& comp : joints.biconnected_components) {
    bool hit = false;
    for (const Edge& e : comp) hit = hit || e.u == i || e.v == i || e.u == j || e.v == j;
    covered = covered && hit;
  }
  if (!covered) violations.push_back("a biconnected component has no observation node");
  pass = pass && cond_ok && covered;
  json doc = {{"strategic", io::to_json(strategic)},
              {"joints", io::to_json(joints)},
              {"components_covered", covered},
              {"condition3", cond3},
              {"distinctness_ok", spectrum.distinctness_ok},
              {"min_eigen_gap", spectrum.min_gap},
              {"connected", graph.connected()}};
  return doc;
}

}  // namespace

NetworkGraph ExperimentConfig::load_graph() const {
  if (topology) return *topology;
  return io::load_topology(topology_path);
}

fs::path ExperimentConfig::records_path() const {
  return records ? *records : output_dir / "trajectory.csv";
}

ExperimentConfig parse_config(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [key, _] : doc.items())
    if (!kTopLevelKeys.count(key)) throw ValidationError("unknown config key '" + key + "'");
  ExperimentConfig c;
  c.base_dir = base_dir;
  try {
    const json& topo = doc.at("topology");
    if (topo.is_string())
      c.topology_path = resolve(base_dir, topo.get<std::string>());
    else
      c.topology = io::topology_from_json(topo);

    const auto obs = doc.at("observation").get<std::vector<int>>();
    if (obs.size() != 2) throw ValidationError("observation must list two nodes");
    c.i = obs[0] - 1;
    c.j = obs[1] - 1;
    if (c.i == c.j) throw ValidationError("observation nodes must differ");

    const json& time = doc.at("time");
    c.T = time.at("T").get<double>();
    c.steps = time.at("steps").get<int>();
    c.T0 = get_or<double>(time, "T0", c.T);
    if (time.contains("T_star") && !time.at("T_star").is_null())
      c.T_star = time.at("T_star").get<double>();
    if (!(c.T > 0) || c.steps < 2) throw ValidationError("time: need T > 0 and steps >= 2");
    if (!(c.T0 > 0) || c.T0 > c.T) throw ValidationError("time: need 0 < T0 <= T");

    if (doc.contains("initial")) {
      c.a = get_or<std::vector<double>>(doc.at("initial"), "a", {});
      c.b = get_or<std::vector<double>>(doc.at("initial"), "b", {});
    }
    if (doc.contains("source")) {
      const json& s = doc.at("source");
      SourceSpec src;
      src.node = s.at("node").get<int>() - 1;
      src.signal = parse_signal(s.at("signal"), c.T0, base_dir);
      c.source = src;
    }
    if (doc.contains("records")) c.records = resolve(base_dir, doc.at("records").get<std::string>());
    if (doc.contains("truth")) c.truth = resolve(base_dir, doc.at("truth").get<std::string>());

    if (doc.contains("adjoint")) {
      const json& adj = doc.at("adjoint");
      if (adj.contains("m")) {
        c.ms = adj.at("m").is_array() ? adj.at("m").get<std::vector<int>>()
                                      : std::vector<int>{adj.at("m").get<int>()};
      }
      c.fourier_order = get_or<int>(adj, "fourier_order", c.fourier_order);
    }
    if (c.ms.empty()) throw ValidationError("adjoint.m must not be empty");
    for (int m : c.ms)
      if (m < 1) throw ValidationError("adjoint.m entries must be >= 1");

    if (doc.contains("noise")) {
      const json& nz = doc.at("noise");
      c.noise_level = get_or<double>(nz, "level", 0.0);
      c.seed = get_or<std::uint64_t>(nz, "seed", 0);
      const auto ref = get_or<std::string>(nz, "reference", "network_deviation");
      if (ref == "network_deviation")
        c.noise_reference = NoiseReference::network_deviation;
      else if (ref == "peak_amplitude")
        c.noise_reference = NoiseReference::peak_amplitude;
      else
        throw ValidationError("unknown noise reference '" + ref + "'");
      if (!(c.noise_level >= 0)) throw ValidationError("noise level must be >= 0");
    }
    if (doc.contains("reconstruction")) {
      const json& rec = doc.at("reconstruction");
      c.method = get_or<std::string>(rec, "method", c.method);
      if (c.method != "deconvolution" && c.method != "fourier")
        throw ValidationError("unknown method '" + c.method + "'");
      const auto mode = get_or<std::string>(rec, "mode", "tikhonov");
      if (mode == "tikhonov")
        c.mode = RegularizationMode::tikhonov;
      else if (mode == "diagonal_shift")
        c.mode = RegularizationMode::diagonal_shift;
      else
        throw ValidationError("unknown regularization mode '" + mode + "'");
      if (rec.contains("r") && !rec.at("r").is_null()) c.r = rec.at("r").get<double>();
      if (rec.contains("observation_node") && !rec.at("observation_node").is_null())
        c.observation_node = rec.at("observation_node").get<int>() - 1;
    }
    if (doc.contains("localization") && doc.at("localization").contains("threshold") &&
        !doc.at("localization").at("threshold").is_null())
      c.threshold = doc.at("localization").at("threshold").get<double>();
    if (doc.contains("rk")) {
      c.rk_abs_tol = get_or<double>(doc.at("rk"), "abs_tol", c.rk_abs_tol);
      c.rk_rel_tol = get_or<double>(doc.at("rk"), "rel_tol", c.rk_rel_tol);
    }
    c.modal_oracle = get_or<bool>(doc, "modal_oracle", false);
    c.output_dir = resolve(base_dir, get_or<std::string>(doc, "output_dir", "out"));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  return parse_config(io::read_json(path), path.parent_path());
}

json config_to_json(const ExperimentConfig& c) {
  json doc;
  doc["topology"] = c.topology ? io::topology_to_json(*c.topology)
                               : json(c.topology_path.lexically_normal().string());
  doc["observation"] = {c.i + 1, c.j + 1};
  doc["time"] = {{"T", c.T}, {"T0", c.T0}, {"steps", c.steps}};
  doc["time"]["T_star"] = c.T_star ? json(*c.T_star) : json(nullptr);
  doc["initial"] = {{"a", c.a}, {"b", c.b}};
  if (c.source) doc["source"] = {{"node", c.source->node + 1}, {"signal", signal_to_json(c.source->signal)}};
  if (c.records) doc["records"] = c.records->lexically_normal().string();
  if (c.truth) doc["truth"] = c.truth->lexically_normal().string();
  doc["adjoint"] = {{"m", c.ms}, {"fourier_order", c.fourier_order}};
  doc["noise"] = {{"level", c.noise_level},
                  {"seed", c.seed},
                  {"reference", c.noise_reference == NoiseReference::network_deviation
                                    ? "network_deviation"
                                    : "peak_amplitude"}};
  doc["reconstruction"] = {
      {"method", c.method},
      {"mode", c.mode == RegularizationMode::tikhonov ? "tikhonov" : "diagonal_shift"}};
  doc["reconstruction"]["r"] = c.r ? json(*c.r) : json(nullptr);
  doc["reconstruction"]["observation_node"] =
      c.observation_node ? json(*c.observation_node + 1) : json(nullptr);
  doc["localization"] = {{"threshold", c.threshold ? json(*c.threshold) : json(nullptr)}};
  doc["rk"] = {{"abs_tol", c.rk_abs_tol}, {"rel_tol", c.rk_rel_tol}};
  doc["modal_oracle"] = c.modal_oracle;
  doc["output_dir"] = c.output_dir.lexically_normal().string();
  return doc;
}

CommandResult run_analyze(const NetworkGraph& graph, int i, int j, int m, double T,
                          double cond_threshold) {
  const int n = graph.size();
  if (i < 0 || j < 0 || i >= n || j >= n || i == j)
    return failure(kExitConfig, "config", "observation nodes must be distinct and in range");
  const LaplacianSpectrum spectrum = spectral_decompose(build_laplacian(graph));
  bool pass = false;
  std::vector<std::string> violations;
  json doc;
  try {
    doc = placement_report(graph, spectrum, i, j, {m}, T, cond_threshold, pass, violations);
  } catch (const ValidationError& e) {
    return failure(kExitConfig, "config", e.what());
  }
  doc["command"] = "analyze";
  doc["pass"] = pass;
  doc["violations"] = violations;
  return {pass ? kExitOk : kExitPlacement, doc};
}

CommandResult run_simulate(const ExperimentConfig& config) {
  json report = {{"command", "simulate"}};
  const NetworkGraph graph = config.load_graph();
  if (!config.source) return failure(kExitConfig, "config", "simulate needs a source block");
  const Matrix L = build_laplacian(graph);
  const int n = graph.size();
  SimulationConfig sc;
  sc.T = config.T;
  sc.steps = config.steps;
  if (!config.a.empty()) sc.a = to_vector(config.a);
  if (!config.b.empty()) sc.b = to_vector(config.b);
  sc.abs_tol = config.rk_abs_tol;
  sc.rel_tol = config.rk_rel_tol;
  sc.validate(n);

  Trajectory clean;
  Dopri5Stats stats;
  try {
    clean = simulate_rk(L, *config.source, sc, &stats);
  } catch (const IntegrationError& e) {
    report["failure_time"] = e.time();
    return failure(kExitSimulation, "simulation", e.what(), report);
  }
  const fs::path dir = config.output_dir;
  fs::create_directories(dir);
  json files = json::array();
  io::write_signal_csv(dir / "signal.csv", clean.times, sample_signal(config.source->signal, clean.times));
  files.push_back(file_entry(dir, "signal.csv", "emitted signal"));
  if (config.noisy()) {
    io::write_trajectory_csv(dir / "trajectory_clean.csv", clean);
    files.push_back(file_entry(dir, "trajectory_clean.csv", "noise-free records"));
    io::write_trajectory_csv(dir / "trajectory.csv",
                             add_noise(clean, config.noise_level, config.seed, config.noise_reference));
    files.push_back(file_entry(dir, "trajectory.csv", "noisy records"));
  } else {
    io::write_trajectory_csv(dir / "trajectory.csv", clean);
    files.push_back(file_entry(dir, "trajectory.csv", "records"));
  }
  report["rk"] = {{"accepted", stats.accepted}, {"rejected", stats.rejected}, {"rhs_evals", stats.rhs_evals}};
  if (config.modal_oracle) {
    const Trajectory modal = simulate_modal(spectral_decompose(L), *config.source, sc);
    io::write_trajectory_csv(dir / "trajectory_modal.csv", modal);
    files.push_back(file_entry(dir, "trajectory_modal.csv", "modal oracle"));
    report["modal_max_abs_diff"] = (modal.states - clean.states).cwiseAbs().maxCoeff();
  }
  json man = manifest(config, "simulate", files);
  man["rk"] = report["rk"];
  if (report.contains("modal_max_abs_diff")) man["modal_max_abs_diff"] = report["modal_max_abs_diff"];
  io::write_json(dir / "manifest_simulate.json", man);
  report["status"] = "ok";
  report["output_dir"] = dir.lexically_normal().string();
  report["files"] = files;
  return {kExitOk, report};
}

CommandResult run_identify(const ExperimentConfig& config) {
  json report = {{"command", "identify"}};
  const fs::path dir = config.output_dir;
  auto finish = [&](CommandResult res) {
    fs::create_directories(dir);
    io::write_json(dir / "report.json", res.report);
    return res;
  };

  NetworkGraph graph = config.load_graph();
  const int n = graph.size();
  if (config.i >= n || config.j >= n)
    return finish(failure(kExitConfig, "config", "observation node out of range", report));
  const Matrix L = build_laplacian(graph);
  const LaplacianSpectrum spectrum = spectral_decompose(L);

  bool placed = false;
  std::vector<std::string> violations;
  report["placement"] = placement_report(graph, spectrum, config.i, config.j, config.ms, config.T,
                                         1e12, placed, violations);
  report["placement"]["violations"] = violations;
  const bool strategic = report["placement"]["strategic"]["is_strategic"].get<bool>();
  bool cond3 = true;
  for (const auto& c : report["placement"]["condition3"]) cond3 = cond3 && c["pass"].get<bool>();
  if (!strategic || !cond3)
    return finish(failure(kExitPlacement, "placement", "observation pair fails identifiability", report));

  Trajectory records_traj;
  try {
    records_traj = io::read_trajectory_csv(config.records_path());
  } catch (const ValidationError& e) {
    return finish(failure(kExitConfig, "records", e.what(), report));
  }
  if (records_traj.steps() != config.steps ||
      std::abs(records_traj.horizon() - config.T) > 1e-9 * config.T ||
      records_traj.size() <= std::max(config.i, config.j))
    return finish(failure(kExitConfig, "records", "records do not match T, steps or the observation nodes", report));
  // Only the observation columns are used from here on.
  const RecordSet records = records_from(records_traj, {config.i, config.j});

  FinalStateEstimate estimate;
  FitWindow window;
  try {
    window = FitWindow::make(config.T_star.value_or(config.T0), config.T, config.steps, config.T0);
    const std::vector<int> obs = {config.i, config.j};
    estimate = estimate_final_state(records, obs, spectrum, window);
  } catch (const Error& e) {
    return finish(failure(kExitWindow, "final_state", e.what(), report));
  }
  io::write_json(dir / "final_state.json", io::to_json(estimate));
  report["final_state"] = io::to_json(estimate);
  report["final_state"]["T_star"] = window.T_star();
  report["final_state"]["file"] = "final_state.json";

  const Vector X0 = config.a.empty() ? Vector::Zero(n) : to_vector(config.a);
  const Vector V0 = config.b.empty() ? Vector::Zero(n) : to_vector(config.b);
  const SturmBasis basis(config.T);
  auto assemble_for = [&](int m) {
    return assemble(L, basis, m, config.i, config.j, X0, estimate.XT, records);
  };
  const double threshold = config.threshold.value_or(config.noisy() ? 1e-1 : 1e-3);
  MultiLocalization loc;
  try {
    loc = localize_multi(assemble_for, config.ms, threshold);
  } catch (const AmbiguityError& e) {
    report["localization"] = {{"candidates", io::nodes_json(e.candidates())}, {"threshold", threshold}};
    return finish(failure(kExitLocalization, "localization", e.what(), report));
  }
  const AdjointSystem best_system = assemble_for(loc.best.m);
  io::write_consistency_csv(dir / "consistency.csv", best_system,
                            consistency_table(best_system, loc.best.winner().solution));
  report["localization"] = io::to_json(loc);
  report["localization"]["file"] = "consistency.csv";
  const int source = loc.source_node;

  std::optional<std::vector<double>> truth;
  ReconstructedSignal signal;
  json recon;
  try {
    std::vector<double> grid(config.steps);
    for (int m = 0; m < config.steps; ++m) grid[m] = records_traj.times[m + 1];
    if (config.truth) {
      auto [tt, tv] = io::read_signal_csv(*config.truth);
      if (tt.size() != records_traj.times.size())
        throw ValidationError("truth signal is not on the record grid");
      truth = std::vector<double>(tv.begin() + 1, tv.end());
    }
    if (config.method == "fourier") {
      auto fr = fourier_reconstruct(assemble_for, source, config.fourier_order, basis, grid);
      signal = std::move(fr.signal);
      json coefs = json::array();
      for (const auto& c : fr.coefficients)
        coefs.push_back({{"m", c.m}, {"lambda_m", c.lambda_m}, {"dropped_row", c.dropped_row + 1}});
      recon["coefficients"] = coefs;
    } else {
      std::vector<int> candidates;
      if (config.observation_node) {
        if (*config.observation_node != config.i && *config.observation_node != config.j)
          throw ValidationError("observation_node must be one of the observation pair");
        candidates.push_back(*config.observation_node);
      } else {
        candidates = {config.i, config.j};
      }
      int chosen = -1;
      double best_norm = -1.0;
      for (int k : candidates) {
        ConvolutionKernel kernel(spectrum, source, k);
        if (!kernel.hidden_modes().empty() && !config.observation_node) continue;
        const auto phi = kernel.samples(records_traj.dt(), config.steps);
        double norm = 0.0;
        for (double v : phi) norm += v * v;
        if (norm > best_norm) {
          best_norm = norm;
          chosen = k;
        }
      }
      if (chosen < 0)
        throw ValidationError("neither observation node sees every mode excited by the source");
      DeconvolutionOptions opt;
      opt.mode = config.mode;
      opt.r = config.r.value_or(default_regularization(config.mode, config.noisy()));
      const Trajectory free = free_evolution(spectrum, X0, V0, config.T, config.steps);
      signal = deconvolve(records.at(chosen), free.node(chosen),
                          ConvolutionKernel(spectrum, source, chosen), opt);
      recon["observation_node"] = chosen + 1;
      if (signal.growth_factor) recon["growth_factor"] = *signal.growth_factor;
    }
  } catch (const Error& e) {
    return finish(failure(kExitReconstruction, "reconstruction", e.what(), report));
  }
  if (truth) signal.relative_error = relative_error(*truth, signal.values);
  io::write_identified_csv(dir / "signal_identified.csv", signal.times, truth, signal.values);
  recon["method"] = signal.method;
  recon["r"] = signal.method == "fourier" ? json(nullptr) : json(signal.r);
  recon["relative_error"] = signal.relative_error ? json(*signal.relative_error) : json(nullptr);
  recon["bandwidth_ratio"] =
      spectrum.size() > 1 ? json(bandwidth_ratio(signal, spectrum.omegas(1))) : json(nullptr);
  recon["file"] = "signal_identified.csv";
  report["reconstruction"] = recon;
  report["status"] = "ok";
  report["source_node"] = source + 1;

  json files = json::array({file_entry(dir, "final_state.json", "final-state estimate"),
                            file_entry(dir, "consistency.csv", "row-pair consistency table"),
                            file_entry(dir, "signal_identified.csv", "identified signal")});
  CommandResult res = finish({kExitOk, report});
  files.push_back(file_entry(dir, "report.json", "run report"));
  io::write_json(dir / "manifest_identify.json", manifest(config, "identify", files));
  return res;
}

CommandResult run_batch(const std::vector<ExperimentConfig>& configs) {
  const long count = static_cast<long>(configs.size());
  std::vector<json> runs(count);
  std::vector<int> codes(count, kExitOk);
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < count; ++k) {
    json run = {{"index", k}, {"output_dir", configs[k].output_dir.lexically_normal().string()}};
    try {
      ExperimentConfig cfg = configs[k];
      if (cfg.source) {
        CommandResult sim = run_simulate(cfg);
        codes[k] = sim.exit_code;
        run["simulate"] = sim.exit_code;
        if (sim.exit_code == kExitOk) {
          cfg.records = cfg.output_dir / "trajectory.csv";
          cfg.truth = cfg.output_dir / "signal.csv";
        }
      }
      if (codes[k] == kExitOk) {
        CommandResult id = run_identify(cfg);
        codes[k] = id.exit_code;
        run["identify"] = id.exit_code;
        if (id.report.contains("source_node")) run["source_node"] = id.report["source_node"];
        if (id.report.contains("reconstruction"))
          run["relative_error"] = id.report["reconstruction"]["relative_error"];
      }
    } catch (const std::exception& e) {
      codes[k] = kExitConfig;
      run["error"] = e.what();
    }
    run["exit_code"] = codes[k];
    runs[k] = std::move(run);
  }
  int code = kExitOk;
  for (int c : codes)
    if (c != kExitOk) {
      code = c;
      break;
    }
  return {code, {{"command", "batch"}, {"runs", runs}, {"status", code == kExitOk ? "ok" : "failed"}}};
}

}  // namespace netsrc
