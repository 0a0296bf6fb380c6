#include <cmath>

#include "netsrc/kernels.hpp"

namespace netsrc::kernels::parallel {

void toeplitz_lower_matvec(std::span<const double> col, std::span<const double> x,
                           std::span<double> y) {
  const long n = static_cast<long>(x.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (long m = 0; m < n; ++m) {
    double acc = 0.0;
    for (long l = 0; l <= m; ++l) acc += col[m - l] * x[l];
    y[m] = acc;
  }
}

void toeplitz_lower_rmatvec(std::span<const double> col, std::span<const double> x,
                            std::span<double> y) {
  const long n = static_cast<long>(x.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (long l = 0; l < n; ++l) {
    double acc = 0.0;
    for (long m = l; m < n; ++m) acc += col[m - l] * x[m];
    y[l] = acc;
  }
}

Matrix toeplitz_lower_gram(std::span<const double> col) {
  const long n = static_cast<long>(col.size());
  Matrix g(n, n);
#pragma omp parallel for schedule(dynamic, 16)
  for (long d = 0; d < n; ++d) {
    double acc = 0.0;
    for (long a = n - 1 - d; a >= 0; --a) {
      const long b = a + d;
      acc += col[n - 1 - a] * col[n - 1 - b];
      g(a, b) = acc;
      g(b, a) = acc;
    }
  }
  return g;
}

Vector weighted_column_sums(const Matrix& samples, std::span<const double> weights) {
  const long cols = static_cast<long>(samples.cols());
  Vector out = Vector::Zero(cols);
#pragma omp parallel for schedule(static)
  for (long k = 0; k < cols; ++k) {
    double acc = 0.0;
    for (Eigen::Index m = 0; m < samples.rows(); ++m) acc += weights[m] * samples(m, k);
    out(k) = acc;
  }
  return out;
}

void modal_kernel_samples(const Vector& c, const Vector& omegas, double dt,
                          std::span<double> out) {
  const long count = static_cast<long>(out.size());
#pragma omp parallel for schedule(static)
  for (long m = 0; m < count; ++m) {
    const double t = dt * static_cast<double>(m + 1);
    double acc = 0.0;
    for (Eigen::Index n = 0; n < c.size(); ++n) {
      const double w = omegas(n);
      acc += c(n) * (w == 0.0 ? t : std::sin(w * t) / w);
    }
    out[m] = acc;
  }
}

}  // namespace netsrc::kernels::parallel
