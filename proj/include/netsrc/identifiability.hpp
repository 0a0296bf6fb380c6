#pragma once

#include <vector>

#include "netsrc/types.hpp"

namespace netsrc {

struct SubmatrixVerdict {
  int p;  // removed rows, p < q
  int q;
  double condition;  // 2-norm condition number, +inf when singular
  bool invertible;
};

struct Condition3Report {
  int m = 0;
  double T = 0.0;
  int i = 0;
  int j = 0;
  double cond_threshold = 0.0;
  std::vector<SubmatrixVerdict> pairs;  // lexicographic (p, q)
  bool pass = false;

  std::vector<SubmatrixVerdict> singular_pairs() const;
};

// Every (N-2)x(N-2) submatrix of laplacian + mu_m I with columns i, j and
// rows p, q removed, mu_m = (m pi / T)^2.
Condition3Report check_identifiability_condition3(const Matrix& laplacian, int m,
                                                  double T, int i, int j,
                                                  double cond_threshold = 1e12);

// Serial sweep with identical results; kept for tests and benchmarks.
Condition3Report check_identifiability_condition3_serial(const Matrix& laplacian,
                                                         int m, double T, int i,
                                                         int j,
                                                         double cond_threshold = 1e12);

// 2-norm condition number via SVD; +inf for an exactly singular matrix.
double condition_number(const Matrix& a);

}  // namespace netsrc
