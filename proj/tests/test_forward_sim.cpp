#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"

#include "netsrc/dopri5.hpp"
#include "netsrc/errors.hpp"
#include "netsrc/noise.hpp"
#include "netsrc/phi_kernel.hpp"
#include "netsrc/signal.hpp"
#include "netsrc/simulation.hpp"

using namespace netsrc;
namespace nt = netsrc::testing;

namespace {

SimulationConfig config(double T, int steps) {
  SimulationConfig c;
  c.T = T;
  c.steps = steps;
  c.abs_tol = 1e-11;
  c.rel_tol = 1e-11;
  return c;
}

}  // namespace

TEST(Dopri5, HarmonicOscillator) {
  const OdeRhs rhs = [](double, const Vector& y, Vector& dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  Vector y(2);
  y << 1, 0;
  std::vector<double> samples;
  for (int k = 0; k <= 50; ++k) samples.push_back(0.4 * k);
  double worst = 0.0;
  Dopri5Options opt;
  opt.abs_tol = opt.rel_tol = 1e-11;
  const Dopri5Stats st = integrate_dopri5(
      rhs, y, 0.0, 20.0, samples,
      [&](std::size_t k, const Vector& s) {
        worst = std::max(worst, std::abs(s[0] - std::cos(samples[k])));
        worst = std::max(worst, std::abs(s[1] + std::sin(samples[k])));
      },
      opt);
  EXPECT_LE(worst, 1e-8);
  EXPECT_GT(st.accepted, 0);
  EXPECT_NEAR(y[0], std::cos(20.0), 1e-8);
}

TEST(Dopri5, BlowUpRaisesIntegrationError) {
  const OdeRhs rhs = [](double, const Vector& y, Vector& dy) { dy[0] = y[0] * y[0]; };
  Vector y = Vector::Ones(1);
  try {
    integrate_dopri5(rhs, y, 0.0, 2.0, {}, [](std::size_t, const Vector&) {});
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_NEAR(e.time(), 1.0, 1e-2);
  }
}

TEST(Simulation, ZeroDataZeroSourceStaysZero) {
  const Matrix L = build_laplacian(nt::five_node_graph());
  const Trajectory t = simulate_rk(L, {}, config(50, 50));
  EXPECT_EQ(t.states.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(t.steps(), 50);
  EXPECT_DOUBLE_EQ(t.horizon(), 50.0);
}

TEST(Simulation, SingleModeOscillates) {
  const Matrix L = build_laplacian(nt::five_node_graph());
  const LaplacianSpectrum sp = spectral_decompose(L);
  SimulationConfig c = config(30, 300);
  c.a = sp.vectors.col(1);
  const Trajectory rk = simulate_rk(L, {}, c);
  const Trajectory modal = simulate_modal(sp, {}, c);
  double worst = 0.0;
  for (int m = 0; m <= 300; ++m) {
    const Vector expected = sp.vectors.col(1) * std::cos(sp.omegas[1] * rk.times[m]);
    worst = std::max(worst, (rk.states.row(m).transpose() - expected).cwiseAbs().maxCoeff());
    EXPECT_LE((modal.states.row(m).transpose() - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_LE(worst, 1e-8);
}

TEST(Simulation, UniformVelocityDrifts) {
  const LaplacianSpectrum sp = spectral_decompose(build_laplacian(nt::five_node_graph()));
  SimulationConfig c = config(10, 10);
  c.b = Vector::Constant(5, 0.5);
  const Trajectory t = simulate_modal(sp, {}, c);
  for (int m = 0; m <= 10; ++m)
    EXPECT_LE((t.states.row(m).array() - 0.5 * m).abs().maxCoeff(), 1e-12);
}

TEST(Simulation, RkMatchesModalOnRandomGraphs) {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> g;
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + k % 11;
    const Matrix L = build_laplacian(nt::random_connected_graph(rng, n, 0.3));
    SimulationConfig c = config(25, 250);
    c.a = Vector::NullaryExpr(n, [&] { return g(rng); });
    c.b = Vector::NullaryExpr(n, [&] { return g(rng); });
    const SourceSpec src{k % n, SignalSpec(GaussianSum{{1.0, -0.5}, {0.3, 0.1}, {5, 12}}, 18)};
    const Trajectory rk = simulate_rk(L, src, c);
    const Trajectory modal = simulate_modal(spectral_decompose(L), src, c);
    EXPECT_LE((rk.states - modal.states).cwiseAbs().maxCoeff(), 1e-6) << "graph " << k;
    EXPECT_LE((rk.velocities - modal.velocities).cwiseAbs().maxCoeff(), 1e-6) << "graph " << k;
  }
}

TEST(Simulation, ShortFixtureRkMatchesModal) {
  const nt::Fixture& f = nt::short_fixture(2);
  const Trajectory modal = simulate_modal(f.spectrum, f.source, f.config);
  EXPECT_LE((f.traj.states - modal.states).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Simulation, EnergyConservedWithoutSource) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  const Matrix L = build_laplacian(nt::random_connected_graph(rng, 9, 0.3));
  SimulationConfig c = config(300, 600);
  c.abs_tol = c.rel_tol = 1e-12;
  c.a = Vector::NullaryExpr(9, [&] { return g(rng); });
  c.b = Vector::NullaryExpr(9, [&] { return g(rng); });
  for (const Trajectory& t : {simulate_rk(L, {}, c), simulate_modal(spectral_decompose(L), {}, c)}) {
    auto energy = [&](int m) {
      const Vector x = t.states.row(m).transpose();
      const Vector v = t.velocities.row(m).transpose();
      return 0.5 * v.squaredNorm() - 0.5 * x.dot(L * x);
    };
    const double e0 = energy(0);
    for (int m = 0; m <= t.steps(); m += 20) EXPECT_NEAR(energy(m), e0, 1e-6 * e0);
  }
}

TEST(Simulation, ForwardMapIsLinear) {
  const LaplacianSpectrum sp = spectral_decompose(build_laplacian(nt::bowtie_graph()));
  SimulationConfig c = config(40, 200);
  const SignalSpec a(GaussianSum{{1.0}, {0.1}, {10}}, 30);
  const SignalSpec b(GaussianSum{{2.0}, {0.02}, {20}}, 30);
  const SignalSpec mix(GaussianSum{{-1.5, 1.0}, {0.1, 0.02}, {10, 20}}, 30);
  const Trajectory ta = simulate_modal(sp, {3, a}, c);
  const Trajectory tb = simulate_modal(sp, {3, b}, c);
  const Trajectory tm = simulate_modal(sp, {3, mix}, c);
  const Matrix combo = -1.5 * ta.states + 0.5 * tb.states;
  EXPECT_LE((tm.states - combo).cwiseAbs().maxCoeff(), 1e-10 * combo.cwiseAbs().maxCoeff());

  // Initial data superpose with the source response.
  SimulationConfig ci = c;
  ci.a = Vector::LinSpaced(5, -1, 1);
  const Trajectory free = simulate_modal(sp, {}, ci);
  const Trajectory both = simulate_modal(sp, {3, a}, ci);
  EXPECT_LE((both.states - free.states - ta.states).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Simulation, FreeEvolutionMatchesModal) {
  const LaplacianSpectrum sp = spectral_decompose(build_laplacian(nt::five_node_graph()));
  SimulationConfig c = config(20, 40);
  c.a = Vector::LinSpaced(5, 0, 4);
  c.b = Vector::LinSpaced(5, 1, -1);
  const Trajectory a = free_evolution(sp, c.a, c.b, 20, 40);
  const Trajectory b = simulate_modal(sp, {}, c);
  EXPECT_LE((a.states - b.states).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Simulation, SourceCutOffLeavesFreeTail) {
  // After the cut-off the solution is a free evolution: the zero-mode
  // component grows linearly.
  const nt::Fixture& f = nt::short_fixture(2);
  const Vector v1 = f.spectrum.vectors.col(0);
  const double y80 = v1.dot(f.traj.states.row(80).transpose());
  const double y90 = v1.dot(f.traj.states.row(90).transpose());
  const double y100 = v1.dot(f.traj.states.row(100).transpose());
  EXPECT_NEAR(y100 - y90, y90 - y80, 1e-7 * std::abs(y100));
}

TEST(Simulation, ConfigValidation) {
  const Matrix L = build_laplacian(nt::five_node_graph());
  EXPECT_THROW(simulate_rk(L, {}, config(-1, 10)), ValidationError);
  EXPECT_THROW(simulate_rk(L, {}, config(10, 1)), ValidationError);
  SimulationConfig c = config(10, 10);
  c.a = Vector::Zero(3);
  EXPECT_THROW(simulate_rk(L, {}, c), ValidationError);
  EXPECT_THROW(simulate_rk(L, {9, SignalSpec(HalfSine{}, 5)}, config(10, 10)), ValidationError);
}

TEST(Signal, CutOffAndShapes) {
  const SignalSpec p = nt::pulse_signal(3, 100, 70);
  EXPECT_NEAR(p(45), 3.0, 1e-6);
  EXPECT_EQ(p(70), 0.0);
  EXPECT_EQ(p(85), 0.0);
  const SignalSpec h(HalfSine{}, 10);
  EXPECT_NEAR(h(5), 1.0, 1e-15);
  EXPECT_EQ(h(10), 0.0);
  const SignalSpec tab(Tabulated{{0, 1, 2}, {0, 2, 0}}, 5);
  EXPECT_DOUBLE_EQ(tab(0.5), 1.0);
  EXPECT_EQ(tab(3), 0.0);
  EXPECT_THROW(SignalSpec(Tabulated{{0, 0}, {1, 1}}, 1), ValidationError);
  EXPECT_EQ(SignalSpec::zero()(1.0), 0.0);
}

TEST(Kernel, TwoNodeAnalytic) {
  const LaplacianSpectrum sp = spectral_decompose(build_laplacian(NetworkGraph(2, {{0, 1}})));
  const double s2 = std::sqrt(2.0);
  const ConvolutionKernel k11(sp, 0, 0), k12(sp, 0, 1);
  for (double t : {0.0, 0.3, 1.7, 12.5}) {
    EXPECT_NEAR(k11(t), t / 2 + std::sin(s2 * t) / (2 * s2), 1e-13);
    EXPECT_NEAR(k12(t), t / 2 - std::sin(s2 * t) / (2 * s2), 1e-13);
    // S along the constant mode only excites the drift.
    const Vector S = Vector::Constant(2, 1 / s2);
    EXPECT_NEAR(eval_phi(sp, S, 0, t), t / s2, 1e-13);
    EXPECT_NEAR(eval_phi(sp, S, 1, t), t / s2, 1e-13);
  }
}

TEST(Kernel, SamplesAndHiddenModes) {
  const LaplacianSpectrum sp = spectral_decompose(build_laplacian(nt::five_node_graph()));
  const ConvolutionKernel k(sp, 2, 0);
  const auto s = k.samples(0.5, 4);
  ASSERT_EQ(s.size(), 4u);
  for (int m = 0; m < 4; ++m) EXPECT_NEAR(s[m], k(0.5 * (m + 1)), 1e-14);
  EXPECT_TRUE(k.hidden_modes().empty());
  EXPECT_EQ(ConvolutionKernel(sp, 2, 3).hidden_modes(), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(k(0.0), 0.0);
}

TEST(Kernel, DuhamelMatchesSimulation) {
  // x_k(t) = int_0^t Phi_k(t - tau) lambda(tau) dtau for zero initial data.
  const nt::Fixture& f = nt::short_fixture(2);
  for (int k : {0, 1, 4}) {
    const ConvolutionKernel kern(f.spectrum, 2, k);
    for (int m : {25, 50, 75, 100}) {
      const double t = f.traj.times[m];
      const double ref = nt::oracle::simpson(
          [&](double tau) { return kern(t - tau) * f.source.signal(tau); }, 0.0,
          std::min(t, 70.0), 200000);
      EXPECT_NEAR(f.traj.states(m, k), ref, 1e-6 * std::max(1.0, std::abs(ref)))
          << "k " << k << " t " << t;
    }
  }
}

TEST(Noise, SeededAndReproducible) {
  const Trajectory& t = nt::short_fixture(2).traj;
  const Trajectory a = add_noise(t, 0.03, 7);
  const Trajectory b = add_noise(t, 0.03, 7);
  const Trajectory c = add_noise(t, 0.03, 8);
  EXPECT_EQ(a.states, b.states);
  EXPECT_NE(a.states, c.states);
  EXPECT_EQ(a.velocities.size(), 0);
  EXPECT_EQ(add_noise(t, 0.0, 7).states, t.states);
}

TEST(Noise, ScalesFollowReference) {
  const Trajectory& t = nt::short_fixture(2).traj;
  const Vector dev = noise_scales(t, NoiseReference::network_deviation);
  const Vector peak = noise_scales(t, NoiseReference::peak_amplitude);
  for (int k = 0; k < 5; ++k) {
    EXPECT_NEAR(peak[k], t.states.col(k).cwiseAbs().maxCoeff(), 0.0);
    double d = 0.0;
    for (int m = 0; m <= t.steps(); ++m)
      d = std::max(d, std::abs(t.states(m, k) - t.states.row(m).mean()));
    EXPECT_NEAR(dev[k], d, 1e-12 * d);
  }
  // Empirical spread of the added noise matches level * sigma.
  const Trajectory n = add_noise(t, 0.05, 3);
  const Matrix diff = n.states - t.states;
  for (int k = 0; k < 5; ++k) {
    const double sd = std::sqrt(diff.col(k).squaredNorm() / diff.rows());
    EXPECT_NEAR(sd, 0.05 * dev[k], 0.35 * 0.05 * dev[k]);
  }
  EXPECT_THROW(add_noise(t, -0.1, 1), ValidationError);
}
