#include "netsrc/final_state.hpp"

#include <cmath>
#include <sstream>

#include "netsrc/errors.hpp"

namespace netsrc {

namespace {

inline double mode_cos(double w, double t) { return w == 0.0 ? 1.0 : std::cos(w * t); }
inline double mode_sin(double w, double t) { return w == 0.0 ? t : std::sin(w * t) / w; }

}  // namespace

FitWindow FitWindow::make(double T_star, double T, int steps, double active_end) {
  if (!(T > 0) || steps < 2) throw ValidationError("fit window needs T > 0 and steps >= 2");
  if (T_star < active_end)
    throw ValidationError("fit window starts at " + std::to_string(T_star) +
                          ", before the source cut-off " + std::to_string(active_end));
  if (!(T_star < T))
    throw ValidationError("no source-free window: T* = " + std::to_string(T_star) +
                          " is not before T = " + std::to_string(T));
  FitWindow w;
  w.T = T;
  w.dt = T / steps;
  w.first = static_cast<int>(std::ceil(T_star / w.dt - 1e-9));
  w.last = steps;
  return w;
}

Matrix build_design_matrix(const LaplacianSpectrum& spectrum, int k, const FitWindow& window) {
  const int n = spectrum.size();
  if (k < 0 || k >= n) throw ValidationError("node out of range");
  if (window.rows() < 2 * n)
    throw ValidationError("fit window has " + std::to_string(window.rows()) +
                          " samples; at least " + std::to_string(2 * n) + " are needed");
  Matrix D(window.rows(), 2 * n);
  for (int r = 0; r < window.rows(); ++r) {
    const double tau = window.time(window.first + r) - window.T;
    for (int mode = 0; mode < n; ++mode) {
      const double w = spectrum.omegas(mode), v = spectrum.vectors(k, mode);
      D(r, 2 * mode) = mode_cos(w, tau) * v;
      D(r, 2 * mode + 1) = mode_sin(w, tau) * v;
    }
  }
  return D;
}

FinalStateEstimate estimate_final_state(const RecordSet& records, std::span<const int> nodes,
                                        const LaplacianSpectrum& spectrum,
                                        const FitWindow& window,
                                        const FinalStateOptions& options) {
  if (nodes.empty()) throw ValidationError("final-state fit needs at least one node");
  const int n = spectrum.size();
  const int rows = window.rows();
  Matrix D(rows * static_cast<int>(nodes.size()), 2 * n);
  Vector data(D.rows());
  for (std::size_t b = 0; b < nodes.size(); ++b) {
    const int k = nodes[b];
    auto it = records.find(k);
    if (it == records.end())
      throw ValidationError("no records for node " + std::to_string(k + 1));
    const TimeSeries& series = it->second;
    if (series.steps() < window.last || std::abs(series.dt - window.dt) > 1e-9 * window.dt)
      throw ValidationError("records for node " + std::to_string(k + 1) +
                            " do not cover the fit window");
    D.middleRows(b * rows, rows) = build_design_matrix(spectrum, k, window);
    for (int r = 0; r < rows; ++r) {
      double x = series.values[window.first + r];
      if (options.single_precision_inputs) x = static_cast<double>(static_cast<float>(x));
      data(b * rows + r) = x;
    }
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(D);
  const int cols = 2 * n;
  Matrix R = qr.matrixR().topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Matrix> svd(R);
  const Vector sv = svd.singularValues();
  RankReport rank;
  rank.columns = cols;
  rank.threshold = options.rank_tol;
  rank.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double cut = options.rank_tol * sv(0);
  for (int c = 0; c < cols; ++c)
    if (sv(c) > cut) ++rank.rank;
  if (rank.rank < cols) {
    const auto modes = invisible_modes(spectrum, nodes);
    std::ostringstream os;
    os << "final-state design matrix has rank " << rank.rank << " < " << cols;
    if (!modes.empty()) {
      os << "; modes";
      for (int mode : modes) os << " " << mode + 1;
      os << " vanish on the observation set";
    }
    throw RankDeficiencyError(os.str(), modes, rank.rank);
  }

  const Vector coef = qr.solve(data);
  FinalStateEstimate est;
  est.y.resize(n);
  est.ydot.resize(n);
  for (int mode = 0; mode < n; ++mode) {
    est.y(mode) = coef(2 * mode);
    est.ydot(mode) = coef(2 * mode + 1);
  }
  est.XT = spectrum.vectors * est.y;
  est.XdotT = spectrum.vectors * est.ydot;
  est.residual = std::sqrt((D * coef - data).squaredNorm() / static_cast<double>(D.rows()));
  est.rank = std::move(rank);
  return est;
}

Vector reconstruct_tail(const FinalStateEstimate& estimate, const LaplacianSpectrum& spectrum,
                        const FitWindow& window, double t) {
  const double slack = 1e-9 * window.T;
  if (t < window.T_star() - slack || t > window.T + slack)
    throw ValidationError("t = " + std::to_string(t) + " lies outside the fit window");
  const double tau = t - window.T;
  Vector y(spectrum.size());
  for (int mode = 0; mode < spectrum.size(); ++mode) {
    const double w = spectrum.omegas(mode);
    y(mode) = mode_cos(w, tau) * estimate.y(mode) + mode_sin(w, tau) * estimate.ydot(mode);
  }
  return spectrum.vectors * y;
}

}  // namespace netsrc
