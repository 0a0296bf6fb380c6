#pragma once

#include <string>
#include <variant>
#include <vector>

namespace netsrc {

// (beta/2) * (tanh((t - t_left)/width) - tanh((t - t_right)/width))
struct TanhPulse {
  double beta = 1.0;
  double t_left = 0.0;
  double t_right = 0.0;
  double width = 1.0;
};

// sin(pi t / active_end)
struct HalfSine {};

// sum_n c_n exp(-alpha_n (t - tau_n)^2)
struct GaussianSum {
  std::vector<double> c;
  std::vector<double> alpha;
  std::vector<double> tau;
};

// Piecewise linear through (times, values), zero outside the table.
struct Tabulated {
  std::vector<double> times;
  std::vector<double> values;
};

using SignalShape = std::variant<TanhPulse, HalfSine, GaussianSum, Tabulated>;

// A shape cut off at active_end: the value is exactly 0 for t >= active_end.
class SignalSpec {
 public:
  SignalSpec(SignalShape shape, double active_end);

  static SignalSpec zero();

  double operator()(double t) const;
  double active_end() const { return active_end_; }
  const SignalShape& shape() const { return shape_; }
  std::string kind() const;

 private:
  SignalShape shape_;
  double active_end_;
};

struct SourceSpec {
  int node = 0;
  SignalSpec signal = SignalSpec::zero();

  double active_end() const { return signal.active_end(); }
};

}  // namespace netsrc
