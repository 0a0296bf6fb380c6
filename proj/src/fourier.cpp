#include "netsrc/fourier.hpp"

#include <exception>
#include <limits>
#include <sstream>

#include "netsrc/errors.hpp"
#include "netsrc/localizer.hpp"

namespace netsrc {

FourierCoefficient extract_coefficient(const AdjointSystem& system, int source,
                                       double cond_threshold) {
  const int n = system.size();
  if (source < 0 || source >= n) throw ValidationError("source row out of range");
  for (int l = 0; l < n; ++l) {
    if (l == source) continue;
    ReducedSolve sol;
    try {
      sol = solve_reduced(system, source, l, cond_threshold);
    } catch (const SingularSystemError&) {
      continue;
    }
    FourierCoefficient c;
    c.m = system.m;
    c.dropped_row = l;
    c.lambda_m = -(system.A_reduced.row(source).dot(sol.solution) + system.rhs(source));
    return c;
  }
  std::ostringstream os;
  os << "every row choice is singular for m = " << system.m;
  throw SingularSystemError(os.str(), std::numeric_limits<double>::infinity());
}

FourierReconstruction fourier_reconstruct(const std::function<AdjointSystem(int)>& assemble_for,
                                          int source, int M, const SturmBasis& basis,
                                          std::span<const double> times,
                                          double cond_threshold) {
  if (M < 1) throw ValidationError("Fourier order M must be >= 1");
  FourierReconstruction out;
  out.coefficients.resize(M);
  std::vector<std::exception_ptr> errors(M);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < M; ++k) {
    try {
      out.coefficients[k] = extract_coefficient(assemble_for(k + 1), source, cond_threshold);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  auto& sig = out.signal;
  sig.method = "fourier";
  sig.times.assign(times.begin(), times.end());
  sig.values.assign(times.size(), 0.0);
  for (std::size_t t = 0; t < times.size(); ++t)
    for (const auto& c : out.coefficients) sig.values[t] += c.lambda_m * basis.phi(c.m, times[t]);
  return out;
}

}  // namespace netsrc
