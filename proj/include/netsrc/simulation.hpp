#pragma once

#include <vector>

#include "netsrc/dopri5.hpp"
#include "netsrc/signal.hpp"
#include "netsrc/spectrum.hpp"
#include "netsrc/types.hpp"

namespace netsrc {

struct SimulationConfig {
  double T = 1.0;
  int steps = 2;  // grid t_m = m T / steps, m = 0..steps
  Vector a;       // X(0); empty means zero
  Vector b;       // Xdot(0); empty means zero
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;

  double dt() const { return T / steps; }
  void validate(int n_nodes) const;
  Vector initial_state(int n_nodes) const;
  Vector initial_velocity(int n_nodes) const;
};

struct Trajectory {
  std::vector<double> times;
  Matrix states;      // (steps+1) x N
  Matrix velocities;  // same shape, or empty

  int steps() const { return static_cast<int>(times.size()) - 1; }
  int size() const { return static_cast<int>(states.cols()); }
  double horizon() const { return times.back(); }
  double dt() const { return horizon() / steps(); }
  TimeSeries node(int k) const;
};

std::vector<double> uniform_grid(double T, int steps);

// Adaptive Dormand-Prince on the 2N first-order system; restarts at the
// signal cut-off so the kink never sits inside a step.
Trajectory simulate_rk(const Matrix& laplacian, const SourceSpec& source,
                       const SimulationConfig& config, Dopri5Stats* stats = nullptr);

// Modal solution: exact propagation of every mode between subgrid points
// (refine per output step) plus 4-point Gauss-Legendre for the forcing.
Trajectory simulate_modal(const LaplacianSpectrum& spectrum, const SourceSpec& source,
                          const SimulationConfig& config, int refine = 4);

// Source-free response X^0 to the initial data on the same grid.
Trajectory free_evolution(const LaplacianSpectrum& spectrum, const Vector& a,
                          const Vector& b, double T, int steps);

}  // namespace netsrc
