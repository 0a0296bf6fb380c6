#include "netsrc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netsrc/errors.hpp"

namespace netsrc {

Matrix LaplacianSpectrum::laplacian() const {
  Vector eig = -omegas.array().square();
  return vectors * eig.asDiagonal() * vectors.transpose();
}

LaplacianSpectrum spectral_decompose(const Matrix& laplacian,
                                     const SpectralOptions& options) {
  const int n = static_cast<int>(laplacian.rows());
  if (n == 0 || laplacian.cols() != n) throw ValidationError("Laplacian must be square");
  const double scale = std::max(1.0, laplacian.cwiseAbs().maxCoeff());
  if ((laplacian - laplacian.transpose()).cwiseAbs().maxCoeff() > options.symmetry_tol * scale)
    throw ValidationError("Laplacian is not symmetric");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(laplacian);
  if (solver.info() != Eigen::Success)
    throw NumericalError("symmetric eigensolver did not converge");

  // Eigen returns ascending eigenvalues; we want descending (omega ascending).
  const Vector& values = solver.eigenvalues();
  const Matrix& vecs = solver.eigenvectors();
  LaplacianSpectrum s;
  s.omegas.resize(n);
  s.vectors.resize(n, n);
  const double zero_tol = 1e-10 * scale;
  std::vector<double> eig(n);
  for (int c = 0; c < n; ++c) {
    const int src = n - 1 - c;
    double lam = values(src);
    eig[c] = lam;
    s.omegas(c) = (-lam <= zero_tol) ? 0.0 : std::sqrt(-lam);
    Vector v = vecs.col(src).normalized();
    const double peak = v.cwiseAbs().maxCoeff();
    for (int k = 0; k < n; ++k) {
      if (std::abs(v(k)) >= peak * (1.0 - 1e-9)) {
        if (v(k) < 0) v = -v;
        break;
      }
    }
    s.vectors.col(c) = v;
  }
  s.min_gap = std::numeric_limits<double>::infinity();
  for (int c = 1; c < n; ++c) s.min_gap = std::min(s.min_gap, eig[c - 1] - eig[c]);
  s.distinctness_ok = !(s.min_gap <= options.gap_tol);
  return s;
}

std::vector<int> invisible_modes(const LaplacianSpectrum& spectrum,
                                 std::span<const int> nodes, double tol) {
  std::vector<int> failing;
  const int n = spectrum.size();
  for (int mode = 0; mode < n; ++mode) {
    const auto v = spectrum.vectors.col(mode);
    const double cut = tol * v.cwiseAbs().maxCoeff();
    bool seen = false;
    for (int k : nodes) {
      if (std::abs(v(k)) > cut) {
        seen = true;
        break;
      }
    }
    if (!seen) failing.push_back(mode);
  }
  return failing;
}

StrategicReport is_strategic_set(const LaplacianSpectrum& spectrum,
                                 std::span<const int> nodes, double tol) {
  if (nodes.empty()) throw ValidationError("strategic check needs a nonempty node set");
  for (int k : nodes)
    if (k < 0 || k >= spectrum.size())
      throw ValidationError("node " + std::to_string(k + 1) + " is out of range");
  StrategicReport report;
  report.nodes.assign(nodes.begin(), nodes.end());
  report.failing_modes = invisible_modes(spectrum, nodes, tol);
  report.is_strategic = report.failing_modes.empty();
  return report;
}

}  // namespace netsrc
