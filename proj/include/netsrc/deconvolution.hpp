#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netsrc/phi_kernel.hpp"
#include "netsrc/signal.hpp"
#include "netsrc/types.hpp"

namespace netsrc {

enum class RegularizationMode { diagonal_shift, tikhonov };
enum class TikhonovSolver { automatic, normal_equations, state_space };

struct DeconvolutionOptions {
  RegularizationMode mode = RegularizationMode::tikhonov;
  double r = 0.1;
  TikhonovSolver solver = TikhonovSolver::automatic;
  int dense_limit = 2000;  // automatic uses normal equations up to this size
};

// Documented defaults: tikhonov 0.1 / 1, diagonal shift 1 / 10.
double default_regularization(RegularizationMode mode, bool noisy);

struct ReconstructedSignal {
  std::vector<double> times;   // t_1 .. t_M
  std::vector<double> values;  // lambda at those times
  std::string method;
  double r = 0.0;
  std::optional<double> relative_error;
  std::optional<double> growth_factor;  // diagonal shift closed-loop radius
};

// (x_k(t_{m+1}) - x0_k(t_{m+1})) / dt for m = 1..M; the missing t_{M+1}
// entry is extrapolated linearly.
std::vector<double> deconvolution_rhs(const TimeSeries& record,
                                      const TimeSeries& homogeneous);

// Solves B Lambda = rhs for the lower-triangular Toeplitz B built from the
// kernel samples Phi(t_1..t_M), regularized per options. Throws
// ValidationError when node k misses modes the source excites.
ReconstructedSignal deconvolve(const TimeSeries& record, const TimeSeries& homogeneous,
                               const ConvolutionKernel& kernel,
                               const DeconvolutionOptions& options);

// Forward substitution with diagonal phi[0] + r.
std::vector<double> solve_diagonal_shift(std::span<const double> phi,
                                         std::span<const double> rhs, double r);
// (B^T B + r I) Lambda = B^T rhs, dense Cholesky.
std::vector<double> solve_tikhonov_dense(std::span<const double> phi,
                                         std::span<const double> rhs, double r);
// Same minimizer via a Riccati sweep over the modal realization of B.
std::vector<double> solve_tikhonov_state_space(const ConvolutionKernel& kernel,
                                               double dt, std::span<const double> rhs,
                                               double r);

// Spectral radius of the diagonal-shift recursion; above 1 it diverges.
double diagonal_shift_growth(const ConvolutionKernel& kernel, double dt, double r);

// sqrt(sum (dlambda/dt)^2 / sum lambda^2) / omega_2: slow signals sit well
// below 1.
double bandwidth_ratio(const ReconstructedSignal& signal, double omega2);

double relative_error(std::span<const double> truth, std::span<const double> estimate);

std::vector<double> sample_signal(const SignalSpec& signal, std::span<const double> times);

}  // namespace netsrc
