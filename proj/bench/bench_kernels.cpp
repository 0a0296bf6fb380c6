#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "netsrc/graph.hpp"
#include "netsrc/identifiability.hpp"
#include "netsrc/kernels.hpp"

using namespace netsrc;

namespace {

std::vector<double> wave(std::size_t n, double w) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = std::sin(w * static_cast<double>(k + 1));
  return v;
}

// Ring with a chord every third node; connected and without joints.
Matrix ring_laplacian(int n) {
  std::vector<Edge> edges;
  for (int k = 0; k < n; ++k) edges.push_back({k, (k + 1) % n});
  for (int k = 0; k + 3 < n; k += 3) edges.push_back({k, k + 3});
  return build_laplacian(NetworkGraph(n, edges));
}

template <auto Fn>
void BM_matvec(benchmark::State& state) {
  const auto M = static_cast<std::size_t>(state.range(0));
  const auto col = wave(M, 0.01), x = wave(M, 0.02);
  std::vector<double> y(M);
  for (auto _ : state) {
    Fn(col, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetComplexityN(state.range(0));
}

template <auto Fn>
void BM_gram(benchmark::State& state) {
  const auto col = wave(static_cast<std::size_t>(state.range(0)), 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(col));
}

template <auto Fn>
void BM_condition3(benchmark::State& state) {
  const Matrix L = ring_laplacian(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(L, 1, 100.0, 0, 1, 1e12));
}

}  // namespace

BENCHMARK(BM_matvec<kernels::serial::toeplitz_lower_matvec>)->Name("matvec/serial")->Arg(2000)->Arg(8000);
BENCHMARK(BM_matvec<kernels::parallel::toeplitz_lower_matvec>)->Name("matvec/parallel")->Arg(2000)->Arg(8000);
BENCHMARK(BM_gram<kernels::serial::toeplitz_lower_gram>)->Name("gram/serial")->Arg(500)->Arg(1500);
BENCHMARK(BM_gram<kernels::parallel::toeplitz_lower_gram>)->Name("gram/parallel")->Arg(500)->Arg(1500);
BENCHMARK(BM_condition3<check_identifiability_condition3_serial>)->Name("condition3/serial")->Arg(20)->Arg(40);
BENCHMARK(BM_condition3<check_identifiability_condition3>)->Name("condition3/parallel")->Arg(20)->Arg(40);

BENCHMARK_MAIN();
