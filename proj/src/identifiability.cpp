#include "netsrc/identifiability.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "netsrc/errors.hpp"

namespace netsrc {

namespace {

std::vector<int> keep_except(int n, int a, int b) {
  std::vector<int> keep;
  keep.reserve(n - 2);
  for (int k = 0; k < n; ++k)
    if (k != a && k != b) keep.push_back(k);
  return keep;
}

Condition3Report prepare(const Matrix& laplacian, int m, double T, int i, int j,
                         double cond_threshold) {
  const int n = static_cast<int>(laplacian.rows());
  if (n < 3) throw ValidationError("condition 3 needs at least 3 nodes");
  if (i == j) throw ValidationError("observation nodes must differ");
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw ValidationError("observation node out of range");
  if (m < 1 || !(T > 0)) throw ValidationError("condition 3 needs m >= 1 and T > 0");
  Condition3Report report;
  report.m = m;
  report.T = T;
  report.i = i;
  report.j = j;
  report.cond_threshold = cond_threshold;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) report.pairs.push_back({p, q, 0.0, false});
  return report;
}

SubmatrixVerdict evaluate(const Matrix& a_cols, int p, int q, double threshold) {
  const int n = static_cast<int>(a_cols.rows());
  const auto rows = keep_except(n, p, q);
  Matrix sub = a_cols(rows, Eigen::all);
  const double cond = condition_number(sub);
  return {p, q, cond, cond < threshold};
}

Matrix column_reduced(const Matrix& laplacian, int m, double T, int i, int j) {
  const int n = static_cast<int>(laplacian.rows());
  const double mu = std::pow(m * std::numbers::pi / T, 2);
  Matrix a = laplacian + mu * Matrix::Identity(n, n);
  return a(Eigen::all, keep_except(n, i, j));
}

void finish(Condition3Report& report) {
  report.pass = true;
  for (const auto& v : report.pairs) report.pass = report.pass && v.invertible;
}

}  // namespace

double condition_number(const Matrix& a) {
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (smin == 0.0 || !std::isfinite(smax)) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

std::vector<SubmatrixVerdict> Condition3Report::singular_pairs() const {
  std::vector<SubmatrixVerdict> out;
  for (const auto& v : pairs)
    if (!v.invertible) out.push_back(v);
  return out;
}

Condition3Report check_identifiability_condition3(const Matrix& laplacian, int m,
                                                  double T, int i, int j,
                                                  double cond_threshold) {
  Condition3Report report = prepare(laplacian, m, T, i, j, cond_threshold);
  const Matrix a_cols = column_reduced(laplacian, m, T, i, j);
  const long count = static_cast<long>(report.pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (long idx = 0; idx < count; ++idx) {
    auto& v = report.pairs[idx];
    v = evaluate(a_cols, v.p, v.q, cond_threshold);
  }
  finish(report);
  return report;
}

Condition3Report check_identifiability_condition3_serial(const Matrix& laplacian,
                                                         int m, double T, int i,
                                                         int j, double cond_threshold) {
  Condition3Report report = prepare(laplacian, m, T, i, j, cond_threshold);
  const Matrix a_cols = column_reduced(laplacian, m, T, i, j);
  for (auto& v : report.pairs) v = evaluate(a_cols, v.p, v.q, cond_threshold);
  finish(report);
  return report;
}

}  // namespace netsrc
