#pragma once

#include <map>
#include <optional>
#include <vector>

#include "netsrc/simulation.hpp"
#include "netsrc/types.hpp"

namespace netsrc {

// phi_m(t) = sqrt(2/T) sin(m pi t / T), the Dirichlet eigenfunctions on (0,T)
// with eigenvalues mu_m = (m pi / T)^2.
class SturmBasis {
 public:
  explicit SturmBasis(double T);

  double T() const { return T_; }
  double phi(int m, double t) const;
  double dphi(int m, double t) const;
  double mu(int m) const;

 private:
  double T_;
};

// Composite trapezoid for the integral of f(t) phi_m(t) over [0, T]. The
// series must span exactly the basis horizon.
double project(const TimeSeries& samples, const SturmBasis& basis, int m);

// Projections of every node of a trajectory.
Vector project_nodes(const Trajectory& traj, const SturmBasis& basis, int m);

using RecordSet = std::map<int, TimeSeries>;

RecordSet records_from(const Trajectory& traj, const std::vector<int>& nodes);

struct AdjointSystem {
  int m = 0;
  double mu = 0.0;
  int i = 0;
  int j = 0;
  Matrix A;                    // laplacian + mu I
  std::vector<int> unknowns;   // nodes behind the columns of A_reduced
  Matrix A_reduced;            // A without columns i, j
  Vector rhs;                  // P_m^{i,j}
  double xbar_i = 0.0;
  double xbar_j = 0.0;
  std::optional<double> lambda_m;

  int size() const { return static_cast<int>(A.rows()); }
};

// -A_reduced xbar = rhs + lambda_m S, where
// rhs = dphi_m(T) X(T) - dphi_m(0) X(0) + A(:,i) xbar_i + A(:,j) xbar_j.
AdjointSystem assemble(const Matrix& laplacian, const SturmBasis& basis, int m,
                       int i, int j, const Vector& X0, const Vector& XT,
                       const RecordSet& records);

}  // namespace netsrc
