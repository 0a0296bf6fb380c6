#include "netsrc/simulation.hpp"

#include <array>
#include <cmath>

#include "netsrc/errors.hpp"

namespace netsrc {

namespace {

// 4-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGaussNodes = {-0.8611363115940526, -0.3399810435848563,
                                               0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights = {0.3478548451374538, 0.6521451548625461,
                                                 0.6521451548625461, 0.3478548451374538};

// cos(w t) and sin(w t)/w, with the w = 0 limits 1 and t.
inline double mode_cos(double w, double t) { return w == 0.0 ? 1.0 : std::cos(w * t); }
inline double mode_sin(double w, double t) { return w == 0.0 ? t : std::sin(w * t) / w; }

void check_source(const SourceSpec& source, int n) {
  if (source.node < 0 || source.node >= n)
    throw ValidationError("source node " + std::to_string(source.node + 1) + " out of range");
}

Trajectory empty_trajectory(const SimulationConfig& config, int n) {
  Trajectory traj;
  traj.times = uniform_grid(config.T, config.steps);
  traj.states = Matrix::Zero(config.steps + 1, n);
  traj.velocities = Matrix::Zero(config.steps + 1, n);
  return traj;
}

}  // namespace

void SimulationConfig::validate(int n_nodes) const {
  if (!(T > 0) || !std::isfinite(T)) throw ValidationError("T must be positive and finite");
  if (steps < 2) throw ValidationError("need at least 2 time steps");
  if (a.size() != 0 && a.size() != n_nodes)
    throw ValidationError("initial state has the wrong length");
  if (b.size() != 0 && b.size() != n_nodes)
    throw ValidationError("initial velocity has the wrong length");
  if (!(abs_tol > 0) || !(rel_tol > 0)) throw ValidationError("RK tolerances must be positive");
}

Vector SimulationConfig::initial_state(int n_nodes) const {
  return a.size() == 0 ? Vector::Zero(n_nodes) : a;
}

Vector SimulationConfig::initial_velocity(int n_nodes) const {
  return b.size() == 0 ? Vector::Zero(n_nodes) : b;
}

TimeSeries Trajectory::node(int k) const {
  if (k < 0 || k >= size()) throw ValidationError("node out of range");
  TimeSeries series;
  series.dt = dt();
  series.values.resize(times.size());
  for (std::size_t m = 0; m < times.size(); ++m) series.values[m] = states(m, k);
  return series;
}

std::vector<double> uniform_grid(double T, int steps) {
  std::vector<double> t(steps + 1);
  for (int m = 0; m <= steps; ++m) t[m] = T * m / steps;
  t[steps] = T;
  return t;
}

Trajectory simulate_rk(const Matrix& laplacian, const SourceSpec& source,
                       const SimulationConfig& config, Dopri5Stats* stats) {
  const int n = static_cast<int>(laplacian.rows());
  config.validate(n);
  check_source(source, n);
  Trajectory traj = empty_trajectory(config, n);

  Vector y(2 * n);
  y << config.initial_state(n), config.initial_velocity(n);
  const int s = source.node;
  OdeRhs rhs = [&](double t, const Vector& state, Vector& dydt) {
    dydt.head(n) = state.tail(n);
    dydt.tail(n).noalias() = laplacian * state.head(n);
    dydt(n + s) += source.signal(t);
  };
  SampleObserver observe;
  std::size_t offset = 0;
  observe = [&](std::size_t idx, const Vector& state) {
    traj.states.row(offset + idx) = state.head(n).transpose();
    traj.velocities.row(offset + idx) = state.tail(n).transpose();
  };

  Dopri5Options opt;
  opt.abs_tol = config.abs_tol;
  opt.rel_tol = config.rel_tol;
  std::vector<double> breaks = {0.0};
  const double cut = source.active_end();
  if (cut > 0 && cut < config.T) breaks.push_back(cut);
  breaks.push_back(config.T);

  Dopri5Stats total;
  std::size_t first = 0;
  for (std::size_t seg = 0; seg + 1 < breaks.size(); ++seg) {
    const double t0 = breaks[seg], t1 = breaks[seg + 1];
    std::size_t end = first;
    while (end < traj.times.size() && (traj.times[end] <= t1 || seg + 2 == breaks.size())) ++end;
    offset = first;
    std::span<const double> samples(traj.times.data() + first, end - first);
    Dopri5Stats st = integrate_dopri5(rhs, y, t0, t1, samples, observe, opt);
    total.accepted += st.accepted;
    total.rejected += st.rejected;
    total.rhs_evals += st.rhs_evals;
    first = end;
  }
  if (stats) *stats = total;
  return traj;
}

Trajectory simulate_modal(const LaplacianSpectrum& spectrum, const SourceSpec& source,
                          const SimulationConfig& config, int refine) {
  const int n = spectrum.size();
  config.validate(n);
  check_source(source, n);
  if (refine < 1) throw ValidationError("refinement factor must be >= 1");
  Trajectory traj = empty_trajectory(config, n);

  const Matrix& V = spectrum.vectors;
  const Vector& w = spectrum.omegas;
  Vector y = V.transpose() * config.initial_state(n);
  Vector yd = V.transpose() * config.initial_velocity(n);
  const Vector sigma = V.row(source.node).transpose();

  auto record = [&](int m) {
    traj.states.row(m) = (V * y).transpose();
    traj.velocities.row(m) = (V * yd).transpose();
  };
  record(0);

  const double cut = source.active_end();
  std::array<double, 4> lam{};
  auto advance = [&](double u, double h) {
    bool forced = u < cut;
    if (forced) {
      for (int q = 0; q < 4; ++q) lam[q] = source.signal(u + 0.5 * h * (1.0 + kGaussNodes[q]));
    }
    for (int k = 0; k < n; ++k) {
      const double c = mode_cos(w(k), h), sn = mode_sin(w(k), h);
      double ny = c * y(k) + sn * yd(k);
      double nyd = -w(k) * w(k) * sn * y(k) + c * yd(k);
      if (forced && sigma(k) != 0.0) {
        double fy = 0.0, fyd = 0.0;
        for (int q = 0; q < 4; ++q) {
          const double lag = 0.5 * h * (1.0 - kGaussNodes[q]);
          const double wq = 0.5 * h * kGaussWeights[q] * lam[q];
          fy += wq * mode_sin(w(k), lag);
          fyd += wq * mode_cos(w(k), lag);
        }
        ny += sigma(k) * fy;
        nyd += sigma(k) * fyd;
      }
      y(k) = ny;
      yd(k) = nyd;
    }
  };

  for (int m = 0; m < config.steps; ++m) {
    const double ta = traj.times[m], tb = traj.times[m + 1];
    const double h = (tb - ta) / refine;
    for (int r = 0; r < refine; ++r) {
      const double u = ta + r * h;
      const double v = (r + 1 == refine) ? tb : u + h;
      if (u < cut && cut < v) {
        advance(u, cut - u);
        advance(cut, v - cut);
      } else {
        advance(u, v - u);
      }
    }
    record(m + 1);
  }
  return traj;
}

Trajectory free_evolution(const LaplacianSpectrum& spectrum, const Vector& a,
                          const Vector& b, double T, int steps) {
  const int n = spectrum.size();
  SimulationConfig config{T, steps, a, b};
  config.validate(n);
  Trajectory traj = empty_trajectory(config, n);
  const Matrix& V = spectrum.vectors;
  const Vector y0 = V.transpose() * config.initial_state(n);
  const Vector yd0 = V.transpose() * config.initial_velocity(n);
  Vector y(n), yd(n);
  for (int m = 0; m <= steps; ++m) {
    const double t = traj.times[m];
    for (int k = 0; k < n; ++k) {
      const double om = spectrum.omegas(k);
      const double c = mode_cos(om, t), sn = mode_sin(om, t);
      y(k) = c * y0(k) + sn * yd0(k);
      yd(k) = -om * om * sn * y0(k) + c * yd0(k);
    }
    traj.states.row(m) = (V * y).transpose();
    traj.velocities.row(m) = (V * yd).transpose();
  }
  return traj;
}

}  // namespace netsrc
