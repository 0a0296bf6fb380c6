#pragma once

#include <span>

#include "netsrc/types.hpp"

// Data-parallel building blocks. `serial` is the reference implementation;
// `parallel` uses OpenMP and must agree with it to rounding.
namespace netsrc::kernels {

namespace serial {

// y = B x with B_ml = col[m - l] for l <= m.
void toeplitz_lower_matvec(std::span<const double> col, std::span<const double> x,
                           std::span<double> y);
// y = B^T x.
void toeplitz_lower_rmatvec(std::span<const double> col, std::span<const double> x,
                            std::span<double> y);
// B^T B.
Matrix toeplitz_lower_gram(std::span<const double> col);
// Column-wise weighted sums: out_k = sum_m w_m samples(m, k).
Vector weighted_column_sums(const Matrix& samples, std::span<const double> weights);
// out_m = sum_n c_n psi_n((m+1) dt), psi_n = t for omega 0, sin(omega t)/omega.
void modal_kernel_samples(const Vector& c, const Vector& omegas, double dt,
                          std::span<double> out);

}  // namespace serial

namespace parallel {

void toeplitz_lower_matvec(std::span<const double> col, std::span<const double> x,
                           std::span<double> y);
void toeplitz_lower_rmatvec(std::span<const double> col, std::span<const double> x,
                            std::span<double> y);
Matrix toeplitz_lower_gram(std::span<const double> col);
Vector weighted_column_sums(const Matrix& samples, std::span<const double> weights);
void modal_kernel_samples(const Vector& c, const Vector& omegas, double dt,
                          std::span<double> out);

}  // namespace parallel

}  // namespace netsrc::kernels
