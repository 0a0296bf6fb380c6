#include "netsrc/phi_kernel.hpp"

#include <cmath>

#include "netsrc/errors.hpp"
#include "netsrc/kernels.hpp"

namespace netsrc {

namespace {

inline double psi(double w, double t) { return w == 0.0 ? t : std::sin(w * t) / w; }

}  // namespace

double eval_phi(const LaplacianSpectrum& spectrum, const Vector& S, int k, double t) {
  if (t < 0) throw ValidationError("Phi is defined for t >= 0");
  if (S.size() != spectrum.size()) throw ValidationError("source vector has the wrong length");
  double sum = 0.0;
  for (int n = 0; n < spectrum.size(); ++n) {
    const double proj = spectrum.vectors.col(n).dot(S);
    sum += proj * spectrum.vectors(k, n) * psi(spectrum.omegas(n), t);
  }
  return sum;
}

ConvolutionKernel::ConvolutionKernel(const LaplacianSpectrum& spectrum, int source, int node)
    : source_(source), node_(node), omegas_(spectrum.omegas) {
  const int n = spectrum.size();
  if (source < 0 || source >= n || node < 0 || node >= n)
    throw ValidationError("kernel node out of range");
  source_weights_ = spectrum.vectors.row(source).transpose();
  node_weights_ = spectrum.vectors.row(node).transpose();
}

double ConvolutionKernel::operator()(double t) const {
  double sum = 0.0;
  for (int n = 0; n < omegas_.size(); ++n)
    sum += source_weights_(n) * node_weights_(n) * psi(omegas_(n), t);
  return sum;
}

std::vector<double> ConvolutionKernel::samples(double dt, int count) const {
  std::vector<double> out(count);
  kernels::parallel::modal_kernel_samples(weights(), omegas_, dt, out);
  return out;
}

std::vector<int> ConvolutionKernel::hidden_modes(double tol) const {
  std::vector<int> hidden;
  for (int n = 0; n < omegas_.size(); ++n)
    if (std::abs(source_weights_(n)) > tol && std::abs(node_weights_(n)) <= tol)
      hidden.push_back(n);
  return hidden;
}

}  // namespace netsrc
