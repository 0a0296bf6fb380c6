#include "netsrc/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "netsrc/errors.hpp"

namespace netsrc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate(const SignalShape& shape, double active_end) {
  std::visit(overloaded{
                 [](const TanhPulse& p) {
                   if (!(p.width > 0)) throw ValidationError("tanh pulse width must be positive");
                 },
                 [&](const HalfSine&) {
                   if (!(active_end > 0) || !std::isfinite(active_end))
                     throw ValidationError("half sine needs a finite positive cut-off");
                 },
                 [](const GaussianSum& g) {
                   if (g.c.size() != g.alpha.size() || g.c.size() != g.tau.size())
                     throw ValidationError("gaussian sum coefficient lists differ in length");
                 },
                 [](const Tabulated& t) {
                   if (t.times.size() != t.values.size())
                     throw ValidationError("tabulated signal: times and values differ in length");
                   if (!std::is_sorted(t.times.begin(), t.times.end()) ||
                       std::adjacent_find(t.times.begin(), t.times.end()) != t.times.end())
                     throw ValidationError("tabulated signal times must increase strictly");
                 },
             },
             shape);
}

}  // namespace

SignalSpec::SignalSpec(SignalShape shape, double active_end)
    : shape_(std::move(shape)), active_end_(active_end) {
  if (std::isnan(active_end_)) throw ValidationError("signal cut-off is NaN");
  validate(shape_, active_end_);
}

SignalSpec SignalSpec::zero() { return SignalSpec(Tabulated{}, 0.0); }

double SignalSpec::operator()(double t) const {
  if (t >= active_end_) return 0.0;
  return std::visit(
      overloaded{
          [&](const TanhPulse& p) {
            return 0.5 * p.beta *
                   (std::tanh((t - p.t_left) / p.width) - std::tanh((t - p.t_right) / p.width));
          },
          [&](const HalfSine&) { return std::sin(std::numbers::pi * t / active_end_); },
          [&](const GaussianSum& g) {
            double sum = 0.0;
            for (std::size_t n = 0; n < g.c.size(); ++n)
              sum += g.c[n] * std::exp(-g.alpha[n] * (t - g.tau[n]) * (t - g.tau[n]));
            return sum;
          },
          [&](const Tabulated& tab) {
            if (tab.times.empty() || t < tab.times.front() || t > tab.times.back()) return 0.0;
            auto hi = std::upper_bound(tab.times.begin(), tab.times.end(), t);
            if (hi == tab.times.end()) return tab.values.back();
            const std::size_t k = hi - tab.times.begin();
            const double t0 = tab.times[k - 1], t1 = tab.times[k];
            const double w = (t - t0) / (t1 - t0);
            return (1.0 - w) * tab.values[k - 1] + w * tab.values[k];
          },
      },
      shape_);
}

std::string SignalSpec::kind() const {
  return std::visit(overloaded{
                        [](const TanhPulse&) { return std::string("tanh_pulse"); },
                        [](const HalfSine&) { return std::string("half_sine"); },
                        [](const GaussianSum&) { return std::string("gaussian_sum"); },
                        [](const Tabulated&) { return std::string("tabulated"); },
                    },
                    shape_);
}

}  // namespace netsrc
