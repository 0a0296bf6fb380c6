#include <cmath>

#include "netsrc/kernels.hpp"

namespace netsrc::kernels::serial {

void toeplitz_lower_matvec(std::span<const double> col, std::span<const double> x,
                           std::span<double> y) {
  const std::size_t n = x.size();
  for (std::size_t m = 0; m < n; ++m) {
    double acc = 0.0;
    for (std::size_t l = 0; l <= m; ++l) acc += col[m - l] * x[l];
    y[m] = acc;
  }
}

void toeplitz_lower_rmatvec(std::span<const double> col, std::span<const double> x,
                            std::span<double> y) {
  const std::size_t n = x.size();
  for (std::size_t l = 0; l < n; ++l) {
    double acc = 0.0;
    for (std::size_t m = l; m < n; ++m) acc += col[m - l] * x[m];
    y[l] = acc;
  }
}

Matrix toeplitz_lower_gram(std::span<const double> col) {
  // G(a,b) = G(a+1,b+1) + col[M-1-a] col[M-1-b], swept up each diagonal.
  const Eigen::Index n = static_cast<Eigen::Index>(col.size());
  Matrix g(n, n);
  for (Eigen::Index d = 0; d < n; ++d) {
    double acc = 0.0;
    for (Eigen::Index a = n - 1 - d; a >= 0; --a) {
      const Eigen::Index b = a + d;
      acc += col[n - 1 - a] * col[n - 1 - b];
      g(a, b) = acc;
      g(b, a) = acc;
    }
  }
  return g;
}

Vector weighted_column_sums(const Matrix& samples, std::span<const double> weights) {
  Vector out = Vector::Zero(samples.cols());
  for (Eigen::Index k = 0; k < samples.cols(); ++k) {
    double acc = 0.0;
    for (Eigen::Index m = 0; m < samples.rows(); ++m) acc += weights[m] * samples(m, k);
    out(k) = acc;
  }
  return out;
}

void modal_kernel_samples(const Vector& c, const Vector& omegas, double dt,
                          std::span<double> out) {
  for (std::size_t m = 0; m < out.size(); ++m) {
    const double t = dt * static_cast<double>(m + 1);
    double acc = 0.0;
    for (Eigen::Index n = 0; n < c.size(); ++n) {
      const double w = omegas(n);
      acc += c(n) * (w == 0.0 ? t : std::sin(w * t) / w);
    }
    out[m] = acc;
  }
}

}  // namespace netsrc::kernels::serial
