#pragma once

#include <vector>

#include <Eigen/Dense>

namespace netsrc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Library-side node and mode indices are 0-based. Files, reports and the
// command line use 1-based node numbers; conversion happens in io/pipeline.

// Samples f(m * dt), m = 0..size-1.
struct TimeSeries {
  double dt = 0.0;
  std::vector<double> values;

  int steps() const { return static_cast<int>(values.size()) - 1; }
  double horizon() const { return dt * steps(); }
  double time(int m) const { return dt * m; }
};

}  // namespace netsrc
