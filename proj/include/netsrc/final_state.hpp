#pragma once

#include <span>
#include <vector>

#include "netsrc/adjoint.hpp"
#include "netsrc/spectrum.hpp"
#include "netsrc/types.hpp"

namespace netsrc {

// Sample indices first..last (inclusive) of the source-free tail.
struct FitWindow {
  double T = 0.0;
  double dt = 0.0;
  int first = 0;
  int last = 0;

  int rows() const { return last - first + 1; }
  double time(int index) const { return dt * index; }
  double T_star() const { return time(first); }

  // Requires active_end <= T_star < T on the grid t_m = m T / steps.
  static FitWindow make(double T_star, double T, int steps, double active_end);
};

// Columns (y_1, ydot_1, ..., y_N, ydot_N): a zero mode contributes
// (1, t - T) v^n_k, others cos(w(t-T)) v^n_k and sin(w(t-T))/w v^n_k.
Matrix build_design_matrix(const LaplacianSpectrum& spectrum, int k,
                           const FitWindow& window);

struct RankReport {
  int rank = 0;
  int columns = 0;
  double threshold = 0.0;  // relative to the largest singular value
  std::vector<double> singular_values;
};

struct FinalStateEstimate {
  Vector y;
  Vector ydot;
  Vector XT;
  Vector XdotT;
  double residual = 0.0;  // RMS over all stacked rows
  RankReport rank;
};

struct FinalStateOptions {
  double rank_tol = 1e-10;
  // Round the records to float before fitting (precision diagnostic).
  bool single_precision_inputs = false;
};

// Joint least squares over the window at the given nodes. Throws
// RankDeficiencyError naming the modes the node set cannot see.
FinalStateEstimate estimate_final_state(const RecordSet& records,
                                        std::span<const int> nodes,
                                        const LaplacianSpectrum& spectrum,
                                        const FitWindow& window,
                                        const FinalStateOptions& options = {});

// Free evolution back from T; t must lie in [T_star, T].
Vector reconstruct_tail(const FinalStateEstimate& estimate,
                        const LaplacianSpectrum& spectrum, const FitWindow& window,
                        double t);

}  // namespace netsrc
