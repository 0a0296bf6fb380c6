#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "netsrc/types.hpp"

namespace netsrc {

struct Dopri5Options {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  double initial_step = 0.0;  // 0 picks one from the local derivative scale
  long max_steps = 100'000'000;
};

struct Dopri5Stats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

using OdeRhs = std::function<void(double t, const Vector& y, Vector& dydt)>;
using SampleObserver = std::function<void(std::size_t index, const Vector& y)>;

// Dormand-Prince 5(4) with Hairer's dense output. Advances y from t0 to t1
// and reports y at every sample time in [t0, t1] (sorted ascending), using
// interpolation inside accepted steps. Throws IntegrationError on step-size
// underflow or non-finite state.
Dopri5Stats integrate_dopri5(const OdeRhs& rhs, Vector& y, double t0, double t1,
                             std::span<const double> sample_times,
                             const SampleObserver& observer,
                             const Dopri5Options& options = {});

}  // namespace netsrc
