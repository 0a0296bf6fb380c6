#pragma once

#include <vector>

#include "netsrc/spectrum.hpp"
#include "netsrc/types.hpp"

namespace netsrc {

// Phi_k(t) = sum_n <S,v^n> v^n_k psi_n(t), psi_n = t for a zero mode and
// sin(omega_n t)/omega_n otherwise.
double eval_phi(const LaplacianSpectrum& spectrum, const Vector& S, int k, double t);

// Impulse response at node k to a unit source at node s.
class ConvolutionKernel {
 public:
  ConvolutionKernel(const LaplacianSpectrum& spectrum, int source, int node);

  double operator()(double t) const;
  // Phi(dt), Phi(2 dt), ..., Phi(count dt).
  std::vector<double> samples(double dt, int count) const;

  int source() const { return source_; }
  int node() const { return node_; }
  const Vector& omegas() const { return omegas_; }
  const Vector& source_weights() const { return source_weights_; }  // <S,v^n>
  const Vector& node_weights() const { return node_weights_; }      // v^n_k
  Vector weights() const { return source_weights_.cwiseProduct(node_weights_); }

  // Modes the source excites that node k cannot see (relative tolerance).
  std::vector<int> hidden_modes(double tol = 1e-9) const;

 private:
  int source_;
  int node_;
  Vector omegas_;
  Vector source_weights_;
  Vector node_weights_;
};

}  // namespace netsrc
