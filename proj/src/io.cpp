#include "netsrc/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "netsrc/errors.hpp"

namespace netsrc::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  return in;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ls(line);
  while (std::getline(ls, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(std::string s, const std::filesystem::path& path, int line) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t start = s.find_first_not_of(' ');
  if (start == std::string::npos) start = s.size();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data() + start, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ValidationError(path.string() + ":" + std::to_string(line) + ": bad number '" + s +
                          "'");
  return v;
}

// Rows of numbers after a header line; returns header cells too.
std::vector<std::vector<double>> read_table(const std::filesystem::path& path,
                                            std::vector<std::string>& header) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.string() + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  header = split(line);
  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (cells.size() != header.size())
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " columns");
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto& c : cells) row.push_back(parse_number(c, path, line_no));
    rows.push_back(std::move(row));
  }
  return rows;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

std::string format_number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

NetworkGraph topology_from_json(const json& doc) {
  if (!doc.contains("n") || !doc.contains("edges"))
    throw ValidationError("topology JSON needs \"n\" and \"edges\"");
  std::vector<Edge> edges;
  for (const auto& e : doc.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw ValidationError("topology edges must be [u, v] pairs");
    edges.push_back({e[0].get<int>() - 1, e[1].get<int>() - 1});
  }
  return NetworkGraph(doc.at("n").get<int>(), std::move(edges));
}

json topology_to_json(const NetworkGraph& graph) {
  json edges = json::array();
  for (const Edge& e : graph.edges()) edges.push_back({e.u + 1, e.v + 1});
  return {{"n", graph.size()}, {"edges", edges}};
}

NetworkGraph load_topology(const std::filesystem::path& path) {
  if (path.extension() == ".json") return topology_from_json(read_json(path));
  auto in = open_in(path);
  return read_edge_list(in);
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  auto out = open_out(path);
  out << "t";
  for (int k = 0; k < traj.size(); ++k) out << ",x" << k + 1;
  out << "\n";
  for (std::size_t m = 0; m < traj.times.size(); ++m) {
    out << format_number(traj.times[m]);
    for (int k = 0; k < traj.size(); ++k) out << "," << format_number(traj.states(m, k));
    out << "\n";
  }
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::vector<std::string> header;
  auto rows = read_table(path, header);
  if (header.size() < 2 || header[0] != "t")
    throw ValidationError(path.string() + ": expected header t,x1,...,xN");
  if (rows.size() < 3) throw ValidationError(path.string() + ": need at least 3 samples");
  const int n = static_cast<int>(header.size()) - 1;
  Trajectory traj;
  traj.states.resize(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t m = 0; m < rows.size(); ++m) {
    traj.times.push_back(rows[m][0]);
    for (int k = 0; k < n; ++k) traj.states(m, k) = rows[m][k + 1];
  }
  const double dt = traj.dt();
  for (std::size_t m = 0; m < traj.times.size(); ++m)
    if (std::abs(traj.times[m] - dt * m) > 1e-9 * traj.horizon())
      throw ValidationError(path.string() + ": time grid is not uniform from 0");
  return traj;
}

void write_signal_csv(const std::filesystem::path& path, const std::vector<double>& times,
                      const std::vector<double>& values) {
  auto out = open_out(path);
  out << "t,lambda\n";
  for (std::size_t m = 0; m < times.size(); ++m)
    out << format_number(times[m]) << "," << format_number(values[m]) << "\n";
}

std::pair<std::vector<double>, std::vector<double>> read_signal_csv(
    const std::filesystem::path& path) {
  std::vector<std::string> header;
  auto rows = read_table(path, header);
  if (header.size() != 2 || header[0] != "t")
    throw ValidationError(path.string() + ": expected header t,lambda");
  std::pair<std::vector<double>, std::vector<double>> out;
  for (auto& r : rows) {
    out.first.push_back(r[0]);
    out.second.push_back(r[1]);
  }
  return out;
}

void write_identified_csv(const std::filesystem::path& path, const std::vector<double>& times,
                          const std::optional<std::vector<double>>& truth,
                          const std::vector<double>& identified) {
  auto out = open_out(path);
  out << (truth ? "t,lambda_true,lambda_identified\n" : "t,lambda_identified\n");
  for (std::size_t m = 0; m < times.size(); ++m) {
    out << format_number(times[m]);
    if (truth) out << "," << format_number((*truth)[m]);
    out << "," << format_number(identified[m]) << "\n";
  }
}

void write_consistency_csv(const std::filesystem::path& path, const AdjointSystem& system,
                           const std::vector<PairRow>& rows) {
  auto out = open_out(path);
  out << "l1,l2";
  for (int k : system.unknowns) out << ",xbar" << k + 1;
  out << ",diff_norm\n";
  for (const auto& r : rows) {
    out << r.l1 + 1 << "," << r.l2 + 1;
    for (std::size_t k = 0; k < system.unknowns.size(); ++k)
      out << "," << (r.solved ? format_number(r.solution(k)) : "");
    out << "," << (r.solved ? format_number(r.diff_norm) : "") << "\n";
  }
}

void write_json(const std::filesystem::path& path, const json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << "\n";
}

json read_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(number_or_null(v(k)));
  return out;
}

json nodes_json(const std::vector<int>& nodes) {
  json out = json::array();
  for (int k : nodes) out.push_back(k + 1);
  return out;
}

json to_json(const StrategicReport& r) {
  return {{"nodes", nodes_json(r.nodes)},
          {"is_strategic", r.is_strategic},
          {"failing_modes", nodes_json(r.failing_modes)}};
}

json to_json(const JointReport& r) {
  json comps = json::array();
  for (const auto& c : r.biconnected_components) {
    json edges = json::array();
    for (const Edge& e : c) edges.push_back({e.u + 1, e.v + 1});
    comps.push_back(edges);
  }
  return {{"joints", nodes_json(r.joints)},
          {"biconnected_components", comps},
          {"sensor_recommendation", nodes_json(r.sensor_recommendation)}};
}

json to_json(const Condition3Report& r) {
  json singular = json::array();
  for (const auto& v : r.singular_pairs())
    singular.push_back({{"p", v.p + 1}, {"q", v.q + 1}, {"condition", number_or_null(v.condition)}});
  double worst = 0.0;
  for (const auto& v : r.pairs) worst = std::max(worst, v.condition);
  return {{"m", r.m},
          {"T", r.T},
          {"i", r.i + 1},
          {"j", r.j + 1},
          {"cond_threshold", r.cond_threshold},
          {"pairs_checked", r.pairs.size()},
          {"max_condition", number_or_null(worst)},
          {"singular_pairs", singular},
          {"pass", r.pass}};
}

json to_json(const FinalStateEstimate& e) {
  return {{"XT", vector_json(e.XT)},
          {"XdotT", vector_json(e.XdotT)},
          {"residual", e.residual},
          {"rank", e.rank.rank}};
}

json to_json(const AdjointSystem& s) {
  json A = json::array(), Ar = json::array();
  for (Eigen::Index r = 0; r < s.A.rows(); ++r) {
    A.push_back(vector_json(s.A.row(r).transpose()));
    Ar.push_back(vector_json(s.A_reduced.row(r).transpose()));
  }
  json doc = {{"m", s.m},          {"mu", s.mu},
              {"i", s.i + 1},      {"j", s.j + 1},
              {"A", A},            {"A_reduced", Ar},
              {"unknowns", nodes_json(s.unknowns)},
              {"rhs", vector_json(s.rhs)},
              {"xbar_i", s.xbar_i}, {"xbar_j", s.xbar_j}};
  doc["lambda_m"] = s.lambda_m ? json(*s.lambda_m) : json(nullptr);
  return doc;
}

json to_json(const LocalizationResult& r) {
  json cands = json::array();
  for (const auto& c : r.candidates) {
    cands.push_back({{"row", c.l1 + 1},
                     {"l2", c.l2 >= 0 ? json(c.l2 + 1) : json(nullptr)},
                     {"l3", c.l3 >= 0 ? json(c.l3 + 1) : json(nullptr)},
                     {"score", number_or_null(c.score)},
                     {"consistent", c.consistent}});
  }
  return {{"source_node", r.source_node + 1},
          {"m", r.m},
          {"threshold", r.threshold},
          {"margin", number_or_null(r.margin)},
          {"candidates", cands}};
}

json to_json(const MultiLocalization& r) {
  json attempts = json::array();
  for (const auto& a : r.attempts) {
    attempts.push_back({{"m", a.m},
                        {"ok", a.ok},
                        {"source_node", a.ok ? json(a.source_node + 1) : json(nullptr)},
                        {"margin", number_or_null(a.margin)},
                        {"retry", a.retry},
                        {"note", a.note}});
  }
  return {{"source_node", r.source_node + 1},
          {"disagreement", r.disagreement},
          {"attempts", attempts},
          {"result", to_json(r.best)}};
}

}  // namespace netsrc::io
