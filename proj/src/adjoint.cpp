#include "netsrc/adjoint.hpp"

#include <cmath>
#include <numbers>

#include "netsrc/errors.hpp"
#include "netsrc/kernels.hpp"

namespace netsrc {

namespace {

void check_index(int m) {
  if (m < 1) throw ValidationError("adjoint index m must be >= 1");
}

// Trapezoid weights times phi_m on the grid, after checking the horizon.
std::vector<double> projection_weights(double dt, int steps, const SturmBasis& basis, int m) {
  check_index(m);
  if (steps < 1 || !(dt > 0)) throw ValidationError("projection needs at least two samples");
  const double horizon = dt * steps;
  if (std::abs(horizon - basis.T()) > 1e-9 * basis.T())
    throw ValidationError("sample grid spans [0, " + std::to_string(horizon) +
                          "] but the basis horizon is " + std::to_string(basis.T()));
  std::vector<double> w(steps + 1);
  for (int k = 0; k <= steps; ++k) w[k] = dt * basis.phi(m, basis.T() * k / steps);
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

}  // namespace

SturmBasis::SturmBasis(double T) : T_(T) {
  if (!(T > 0) || !std::isfinite(T)) throw ValidationError("basis horizon must be positive");
}

double SturmBasis::phi(int m, double t) const {
  return std::sqrt(2.0 / T_) * std::sin(m * std::numbers::pi * t / T_);
}

double SturmBasis::dphi(int m, double t) const {
  const double k = m * std::numbers::pi / T_;
  return std::sqrt(2.0 / T_) * k * std::cos(k * t);
}

double SturmBasis::mu(int m) const {
  if (m < 1) throw ValidationError("mode index must be at least 1");
  const double k = m * std::numbers::pi / T_;
  return k * k;
}

double project(const TimeSeries& samples, const SturmBasis& basis, int m) {
  const auto w = projection_weights(samples.dt, samples.steps(), basis, m);
  double acc = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) acc += w[k] * samples.values[k];
  return acc;
}

Vector project_nodes(const Trajectory& traj, const SturmBasis& basis, int m) {
  const auto w = projection_weights(traj.dt(), traj.steps(), basis, m);
  return kernels::parallel::weighted_column_sums(traj.states, w);
}

RecordSet records_from(const Trajectory& traj, const std::vector<int>& nodes) {
  RecordSet records;
  for (int k : nodes) records.emplace(k, traj.node(k));
  return records;
}

AdjointSystem assemble(const Matrix& laplacian, const SturmBasis& basis, int m, int i,
                       int j, const Vector& X0, const Vector& XT, const RecordSet& records) {
  check_index(m);
  const int n = static_cast<int>(laplacian.rows());
  if (i == j) throw ValidationError("observation nodes must differ");
  if (i < 0 || j < 0 || i >= n || j >= n) throw ValidationError("observation node out of range");
  if (X0.size() != n || XT.size() != n)
    throw ValidationError("X(0) and X(T) must have one entry per node");
  auto ri = records.find(i), rj = records.find(j);
  if (ri == records.end() || rj == records.end())
    throw ValidationError("records missing for observation node " +
                          std::to_string((ri == records.end() ? i : j) + 1));

  AdjointSystem sys;
  sys.m = m;
  sys.mu = basis.mu(m);
  sys.i = i;
  sys.j = j;
  sys.A = laplacian + sys.mu * Matrix::Identity(n, n);
  for (int k = 0; k < n; ++k)
    if (k != i && k != j) sys.unknowns.push_back(k);
  sys.A_reduced = sys.A(Eigen::all, sys.unknowns);
  sys.xbar_i = project(ri->second, basis, m);
  sys.xbar_j = project(rj->second, basis, m);
  sys.rhs = basis.dphi(m, basis.T()) * XT - basis.dphi(m, 0.0) * X0 +
            sys.A.col(i) * sys.xbar_i + sys.A.col(j) * sys.xbar_j;
  return sys;
}

}  // namespace netsrc
