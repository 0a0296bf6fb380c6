#include "netsrc/noise.hpp"

#include <cmath>
#include <random>

#include "netsrc/errors.hpp"

namespace netsrc {

Vector noise_scales(const Trajectory& traj, NoiseReference reference) {
  const Matrix& x = traj.states;
  if (reference == NoiseReference::peak_amplitude) return x.cwiseAbs().colwise().maxCoeff();
  const Vector mean = x.rowwise().mean();
  return (x.colwise() - mean).cwiseAbs().colwise().maxCoeff();
}

Trajectory add_noise(const Trajectory& traj, double level, std::uint64_t seed,
                     NoiseReference reference) {
  if (!(level >= 0)) throw ValidationError("noise level must be >= 0");
  Trajectory out;
  out.times = traj.times;
  out.states = traj.states;
  if (level == 0) {
    out.velocities = traj.velocities;
    return out;
  }
  const Vector sigma = level * noise_scales(traj, reference);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index m = 0; m < out.states.rows(); ++m)
    for (Eigen::Index k = 0; k < out.states.cols(); ++k)
      out.states(m, k) += sigma(k) * normal(gen);
  return out;
}

}  // namespace netsrc
