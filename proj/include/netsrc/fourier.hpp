#pragma once

#include <functional>
#include <span>
#include <vector>

#include "netsrc/adjoint.hpp"
#include "netsrc/deconvolution.hpp"

namespace netsrc {

struct FourierCoefficient {
  int m = 0;
  double lambda_m = 0.0;
  int dropped_row = -1;  // the row dropped besides the source row
};

// lambda_m = -(A_reduced xbar + rhs)_s with xbar solved from the rows other
// than s and the smallest admissible companion row.
FourierCoefficient extract_coefficient(const AdjointSystem& system, int source,
                                       double cond_threshold = 1e12);

struct FourierReconstruction {
  std::vector<FourierCoefficient> coefficients;
  ReconstructedSignal signal;
};

// Coefficients for m = 1..M, synthesized on `times`.
FourierReconstruction fourier_reconstruct(
    const std::function<AdjointSystem(int)>& assemble_for, int source, int M,
    const SturmBasis& basis, std::span<const double> times,
    double cond_threshold = 1e12);

}  // namespace netsrc
