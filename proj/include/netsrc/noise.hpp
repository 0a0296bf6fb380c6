#pragma once

#include <cstdint>

#include "netsrc/simulation.hpp"

namespace netsrc {

enum class NoiseReference {
  // sigma_k = max_m |x_k(t_m) - mean_j x_j(t_m)|
  network_deviation,
  // sigma_k = max_m |x_k(t_m)|
  peak_amplitude,
};

Vector noise_scales(const Trajectory& traj, NoiseReference reference);

// x_k(t_m) + level * sigma_k * g with g ~ N(0,1) from mt19937_64(seed).
// Velocities are dropped from the result; records carry positions only.
Trajectory add_noise(const Trajectory& traj, double level, std::uint64_t seed,
                     NoiseReference reference = NoiseReference::network_deviation);

}  // namespace netsrc
