#pragma once

#include <span>
#include <vector>

#include "netsrc/types.hpp"

namespace netsrc {

struct SpectralOptions {
  double symmetry_tol = 1e-12;
  // Consecutive eigenvalue gaps at or below this clear distinctness_ok.
  double gap_tol = 1e-8;
};

// Eigenpairs of a Laplacian: laplacian * v_n = -omega_n^2 v_n.
struct LaplacianSpectrum {
  Vector omegas;   // ascending; exact zeros for null-space modes
  Matrix vectors;  // column n is v^n, orthonormal
  bool distinctness_ok = true;
  double min_gap = 0.0;

  int size() const { return static_cast<int>(omegas.size()); }
  Matrix laplacian() const;
};

// Sign convention: the first component of largest magnitude is positive.
LaplacianSpectrum spectral_decompose(const Matrix& laplacian,
                                     const SpectralOptions& options = {});

struct StrategicReport {
  std::vector<int> nodes;
  bool is_strategic = false;
  std::vector<int> failing_modes;
};

// A mode fails when |v^n_k| <= tol * max|v^n| for every k in nodes.
StrategicReport is_strategic_set(const LaplacianSpectrum& spectrum,
                                 std::span<const int> nodes, double tol = 1e-9);

// Modes n with |v^n_k| <= tol * max|v^n| for every k in nodes.
std::vector<int> invisible_modes(const LaplacianSpectrum& spectrum,
                                 std::span<const int> nodes, double tol = 1e-9);

}  // namespace netsrc
