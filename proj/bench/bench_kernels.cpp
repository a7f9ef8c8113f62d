// Serial reference vs OpenMP kernels. Thread count follows EDLKIT_THREADS.

#include <benchmark/benchmark.h>

#include <random>

#include "edlkit/catalog.hpp"
#include "edlkit/pauli_kernels.hpp"
#include "edlkit/robustness.hpp"

using namespace edl;

namespace {

ComplexMatrix random_hermitian(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const double re = g(rng);
      const double im = g(rng);
      m(r, c) = Complex(re, im);
    }
  }
  return 0.5 * (m + m.adjoint());
}

void BM_PauliKernelSerial(benchmark::State& state) {
  const int dim = 1 << state.range(0);
  const ComplexMatrix x = random_hermitian(dim, 1), y = random_hermitian(dim, 2);
  for (auto _ : state) benchmark::DoNotOptimize(pauli_kernel_serial(x, y));
}

void BM_PauliKernelParallel(benchmark::State& state) {
  const int dim = 1 << state.range(0);
  const ComplexMatrix x = random_hermitian(dim, 1), y = random_hermitian(dim, 2);
  for (auto _ : state) benchmark::DoNotOptimize(pauli_kernel(x, y));
}

void BM_BiseparableSerial(benchmark::State& state) {
  const Witness w = load_paper_witness(NamedState::D4, 5);
  for (auto _ : state) benchmark::DoNotOptimize(sample_biseparable_min_serial(w.expr, state.range(0), 7));
}

void BM_BiseparableParallel(benchmark::State& state) {
  const Witness w = load_paper_witness(NamedState::D4, 5);
  for (auto _ : state) benchmark::DoNotOptimize(sample_biseparable_min(w.expr, state.range(0), 7));
}

void BM_ToleranceCurveSerial(benchmark::State& state) {
  const PureState d4 = make_state(NamedState::D4);
  const DensityMatrix rho = DensityMatrix::from_pure(d4);
  const Witness w = load_paper_witness(NamedState::D4, 5);
  const auto grid = default_theta_grid();
  for (auto _ : state) benchmark::DoNotOptimize(tolerance_curve_serial(w, rho, grid, MisalignmentMode::AllAxes));
}

void BM_ToleranceCurveParallel(benchmark::State& state) {
  const PureState d4 = make_state(NamedState::D4);
  const DensityMatrix rho = DensityMatrix::from_pure(d4);
  const Witness w = load_paper_witness(NamedState::D4, 5);
  const auto grid = default_theta_grid();
  for (auto _ : state) benchmark::DoNotOptimize(tolerance_curve(w, rho, grid, MisalignmentMode::AllAxes));
}

}  // namespace

BENCHMARK(BM_PauliKernelSerial)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PauliKernelParallel)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BiseparableSerial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BiseparableParallel)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ToleranceCurveSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ToleranceCurveParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
