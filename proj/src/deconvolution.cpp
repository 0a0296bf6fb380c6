#include "netsrc/deconvolution.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "netsrc/errors.hpp"
#include "netsrc/kernels.hpp"

namespace netsrc {

namespace {

// Modal realization Phi(t_j) = h^T A^(j-1) g of the kernel on the grid.
// Only modes with a nonzero weight carry state.
struct Realization {
  Matrix A;
  Vector g;
  Vector h;
};

Realization realize(const ConvolutionKernel& kernel, double dt) {
  const Vector c = kernel.weights();
  std::vector<int> active;
  for (int n = 0; n < c.size(); ++n)
    if (c(n) != 0.0) active.push_back(n);
  const int p = static_cast<int>(active.size());
  Realization re{Matrix::Zero(2 * p, 2 * p), Vector::Zero(2 * p), Vector::Zero(2 * p)};
  for (int b = 0; b < p; ++b) {
    const double w = kernel.omegas()(active[b]);
    const double cs = w == 0.0 ? 1.0 : std::cos(w * dt);
    const double sn = w == 0.0 ? dt : std::sin(w * dt) / w;
    re.A.block<2, 2>(2 * b, 2 * b) << cs, sn, -w * w * sn, cs;
    re.g(2 * b) = c(active[b]) * sn;
    re.g(2 * b + 1) = c(active[b]) * cs;
    re.h(2 * b) = 1.0;
  }
  return re;
}

void require_finite(const std::vector<double>& values, const std::string& what) {
  for (double v : values)
    if (!std::isfinite(v)) throw NumericalError(what + " produced non-finite values");
}

}  // namespace

double default_regularization(RegularizationMode mode, bool noisy) {
  if (mode == RegularizationMode::tikhonov) return noisy ? 1.0 : 0.1;
  return noisy ? 10.0 : 1.0;
}

std::vector<double> deconvolution_rhs(const TimeSeries& record, const TimeSeries& homogeneous) {
  if (record.values.size() != homogeneous.values.size() ||
      std::abs(record.dt - homogeneous.dt) > 1e-12 * record.dt)
    throw ValidationError("record and homogeneous response are on different grids");
  const int M = record.steps();
  if (M < 2) throw ValidationError("deconvolution needs at least 2 steps");
  std::vector<double> d(M + 2);
  for (int m = 0; m <= M; ++m) d[m] = record.values[m] - homogeneous.values[m];
  d[M + 1] = 2.0 * d[M] - d[M - 1];
  std::vector<double> q(M);
  for (int m = 0; m < M; ++m) q[m] = d[m + 2] / record.dt;
  return q;
}

std::vector<double> solve_diagonal_shift(std::span<const double> phi,
                                         std::span<const double> rhs, double r) {
  const std::size_t M = rhs.size();
  if (phi.size() < M) throw ValidationError("kernel shorter than data");
  const double diag = phi[0] + r;
  if (std::abs(phi[0]) + r < 1e-14 || diag == 0.0)
    throw NumericalError("diagonal Phi(t_1) + r vanishes");
  std::vector<double> lam(M);
  for (std::size_t m = 0; m < M; ++m) {
    double acc = rhs[m];
    for (std::size_t l = 0; l < m; ++l) acc -= phi[m - l] * lam[l];
    lam[m] = acc / diag;
  }
  return lam;
}

std::vector<double> solve_tikhonov_dense(std::span<const double> phi,
                                         std::span<const double> rhs, double r) {
  const std::size_t M = rhs.size();
  if (phi.size() < M) throw ValidationError("kernel shorter than data");
  std::span<const double> col = phi.first(M);
  Matrix G = kernels::parallel::toeplitz_lower_gram(col);
  G.diagonal().array() += r;
  Vector b(M);
  kernels::parallel::toeplitz_lower_rmatvec(col, rhs, std::span<double>(b.data(), M));
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success)
    throw NumericalError("normal equations are not positive definite; increase r");
  Vector x = llt.solve(b);
  return std::vector<double>(x.data(), x.data() + M);
}

std::vector<double> solve_tikhonov_state_space(const ConvolutionKernel& kernel, double dt,
                                               std::span<const double> rhs, double r) {
  const Realization re = realize(kernel, dt);
  const int M = static_cast<int>(rhs.size());
  const Eigen::Index dim = re.A.rows();
  if (dim == 0) throw NumericalError("kernel is identically zero");
  Matrix P = Matrix::Zero(dim, dim);
  Vector q = Vector::Zero(dim);
  Matrix K(M, dim);
  Vector gz(M), d(M);
  Matrix S(dim, dim), SA(dim, dim);
  Vector z(dim);
  for (int m = M - 1; m >= 0; --m) {
    S = P;
    S += re.h * re.h.transpose();
    z = q + re.h * rhs[m];
    SA.noalias() = S * re.A;
    const Vector Sg = S * re.g;
    d(m) = r + re.g.dot(Sg);
    if (!(d(m) > 0)) throw NumericalError("Tikhonov sweep lost positivity; increase r");
    K.row(m) = re.g.transpose() * SA;
    gz(m) = re.g.dot(z);
    P.noalias() = re.A.transpose() * SA;
    P -= K.row(m).transpose() * K.row(m) / d(m);
    P = 0.5 * (P + P.transpose()).eval();
    q = re.A.transpose() * z - K.row(m).transpose() * (gz(m) / d(m));
  }
  std::vector<double> lam(M);
  Vector xi = Vector::Zero(dim);
  for (int m = 0; m < M; ++m) {
    lam[m] = (gz(m) - K.row(m).dot(xi)) / d(m);
    xi = re.A * xi + re.g * lam[m];
  }
  return lam;
}

double diagonal_shift_growth(const ConvolutionKernel& kernel, double dt, double r) {
  const Realization re = realize(kernel, dt);
  if (re.A.rows() == 0) return 0.0;
  const double diag = re.h.dot(re.g) + r;
  const Matrix F = re.A - re.g * (re.h.transpose() * re.A) / diag;
  Eigen::EigenSolver<Matrix> es(F, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

ReconstructedSignal deconvolve(const TimeSeries& record, const TimeSeries& homogeneous,
                               const ConvolutionKernel& kernel,
                               const DeconvolutionOptions& options) {
  if (!(options.r >= 0)) throw ValidationError("regularization r must be >= 0");
  if (auto hidden = kernel.hidden_modes(); !hidden.empty()) {
    std::ostringstream os;
    os << "observation node " << kernel.node() + 1 << " does not see mode";
    for (int n : hidden) os << " " << n + 1;
    os << " excited by the source at node " << kernel.source() + 1;
    throw ValidationError(os.str());
  }
  const std::vector<double> q = deconvolution_rhs(record, homogeneous);
  const int M = static_cast<int>(q.size());
  const double dt = record.dt;

  ReconstructedSignal out;
  out.r = options.r;
  out.times.resize(M);
  for (int m = 0; m < M; ++m) out.times[m] = dt * (m + 1);

  if (options.mode == RegularizationMode::diagonal_shift) {
    const auto phi = kernel.samples(dt, M);
    out.method = "deconvolution/diagonal_shift";
    out.growth_factor = diagonal_shift_growth(kernel, dt, options.r);
    out.values = solve_diagonal_shift(phi, q, options.r);
    for (double v : out.values) {
      if (std::isfinite(v)) continue;
      std::ostringstream os;
      os << "diagonal-shift recursion diverged (growth factor " << *out.growth_factor
         << "); use tikhonov or a larger r";
      throw NumericalError(os.str());
    }
    return out;
  }

  const bool dense = options.solver == TikhonovSolver::normal_equations ||
                     (options.solver == TikhonovSolver::automatic && M <= options.dense_limit);
  out.method = "deconvolution/tikhonov";
  out.values = dense ? solve_tikhonov_dense(kernel.samples(dt, M), q, options.r)
                     : solve_tikhonov_state_space(kernel, dt, q, options.r);
  require_finite(out.values, "Tikhonov solve");
  return out;
}

double bandwidth_ratio(const ReconstructedSignal& signal, double omega2) {
  const auto& v = signal.values;
  if (v.size() < 2 || !(omega2 > 0)) return std::numeric_limits<double>::quiet_NaN();
  const double dt = signal.times[1] - signal.times[0];
  double num = 0.0, den = 0.0;
  for (std::size_t m = 0; m + 1 < v.size(); ++m) {
    const double dv = (v[m + 1] - v[m]) / dt;
    num += dv * dv;
  }
  for (double x : v) den += x * x;
  if (den == 0.0) return 0.0;
  return std::sqrt(num / den) / omega2;
}

double relative_error(std::span<const double> truth, std::span<const double> estimate) {
  if (truth.size() != estimate.size()) throw ValidationError("signals differ in length");
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    num += (truth[k] - estimate[k]) * (truth[k] - estimate[k]);
    den += truth[k] * truth[k];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

std::vector<double> sample_signal(const SignalSpec& signal, std::span<const double> times) {
  std::vector<double> out(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) out[k] = signal(times[k]);
  return out;
}

}  // namespace netsrc
