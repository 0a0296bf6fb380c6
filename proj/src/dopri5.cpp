#include "netsrc/dopri5.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "netsrc/errors.hpp"

namespace netsrc {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense output weights (Hairer, contd5).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

double rms_scaled(const Vector& v, const Vector& scale) {
  return std::sqrt((v.array() / scale.array()).square().mean());
}

[[noreturn]] void fail(const std::string& why, double t) {
  std::ostringstream os;
  os << "integration failed at t = " << t << ": " << why;
  throw IntegrationError(os.str(), t);
}

}  // namespace

Dopri5Stats integrate_dopri5(const OdeRhs& rhs, Vector& y, double t0, double t1,
                             std::span<const double> sample_times,
                             const SampleObserver& observer, const Dopri5Options& opt) {
  Dopri5Stats stats;
  const Eigen::Index n = y.size();
  std::size_t next = 0;
  while (next < sample_times.size() && sample_times[next] <= t0) observer(next++, y);
  if (t1 <= t0) return stats;

  const double uround = std::numeric_limits<double>::epsilon();
  const double hmax = t1 - t0;
  Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y1(n), err(n), sc(n);
  Vector r1(n), r2(n), r3(n), r4(n), r5(n), ys(n);

  auto eval = [&](double t, const Vector& state, Vector& out) {
    rhs(t, state, out);
    ++stats.rhs_evals;
  };

  double t = t0;
  eval(t, y, k1);
  double h = opt.initial_step;
  if (h <= 0) {
    sc = opt.abs_tol + opt.rel_tol * y.array().abs();
    const double dnf = rms_scaled(k1, sc), dny = rms_scaled(y, sc);
    h = (dnf <= 1e-5 || dny <= 1e-5) ? 1e-6 : 0.01 * dny / dnf;
    h = std::min(h, hmax);
    ytmp = y + h * k1;
    eval(t + h, ytmp, k2);
    const double der2 = rms_scaled(k2 - k1, sc) / h;
    const double der12 = std::max(der2, dnf);
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    h = std::min({100 * h, h1, hmax});
  }

  double facold = 1e-4;
  bool last_rejected = false;
  constexpr double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75;
  constexpr double facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;

  while (t < t1) {
    if (stats.accepted + stats.rejected >= opt.max_steps) fail("step budget exhausted", t);
    if (0.1 * h <= std::abs(t) * uround || h <= 0) fail("step size underflow", t);
    bool last = false;
    if (t + 1.01 * h >= t1) {
      h = t1 - t;
      last = true;
    }

    ytmp = y + h * a21 * k1;
    eval(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    eval(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    eval(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    eval(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    const double tph = last ? t1 : t + h;
    eval(tph, ytmp, k6);
    y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    eval(tph, y1, k7);

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    sc = opt.abs_tol + opt.rel_tol * y.array().abs().max(y1.array().abs());
    const double e = rms_scaled(err, sc);
    if (!std::isfinite(e)) {
      if (!y1.allFinite() && !y.allFinite()) fail("state is not finite", t);
      ++stats.rejected;
      h *= 0.1;
      last_rejected = true;
      continue;
    }

    const double fac11 = std::pow(e, expo1);
    if (e <= 1.0) {
      double fac = fac11 / std::pow(facold, beta);
      fac = std::max(facc2, std::min(facc1, fac / safe));
      double hnew = h / fac;
      facold = std::max(e, 1e-4);
      ++stats.accepted;

      if (next < sample_times.size() && sample_times[next] <= tph) {
        r1 = y;
        r2 = y1 - y;
        r3 = h * k1 - r2;
        r4 = r2 - h * k7 - r3;
        r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        while (next < sample_times.size() && sample_times[next] <= tph) {
          const double s = sample_times[next];
          if (s == tph) {
            observer(next++, y1);
            continue;
          }
          const double th = (s - t) / h, th1 = 1.0 - th;
          ys = r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
          observer(next++, ys);
        }
      }

      k1 = k7;
      y = y1;
      t = tph;
      if (last) break;
      if (last_rejected) hnew = std::min(hnew, h);
      h = std::min(hnew, hmax);
      last_rejected = false;
    } else {
      h /= std::min(facc1, fac11 / safe);
      ++stats.rejected;
      last_rejected = true;
    }
  }
  return stats;
}

}  // namespace netsrc
