#include <benchmark/benchmark.h>

#include "eulercs/construct.hpp"
#include "eulercs/imaging.hpp"
#include "eulercs/props.hpp"
#include "eulercs/random.hpp"
#include "eulercs/recovery.hpp"

using namespace eulercs;

static void BM_EulerSquare(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto k = static_cast<std::uint32_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(euler_square(n, k));
}
BENCHMARK(BM_EulerSquare)->Args({11, 5})->Args({23, 10})->Args({60, 2})->Args({49, 48});

static void BM_BinaryMatrix(benchmark::State& state) {
  const EulerSquare s = euler_square(static_cast<std::uint32_t>(state.range(0)),
                                     static_cast<std::uint32_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(build_binary_matrix(s));
}
BENCHMARK(BM_BinaryMatrix)->Args({11, 5})->Args({23, 10})->Args({49, 48});

static void BM_Coherence(benchmark::State& state) {
  const SensingMatrix m = build_binary_matrix(euler_square(static_cast<std::uint32_t>(state.range(0)),
                                                           static_cast<std::uint32_t>(state.range(1))));
  for (auto _ : state) benchmark::DoNotOptimize(coherence(m));
}
BENCHMARK(BM_Coherence)->Args({11, 5})->Args({23, 10})->Args({49, 48})->Unit(benchmark::kMillisecond);

static void BM_ExtendedCoherence(benchmark::State& state) {
  const SensingMatrix m = build_extended(static_cast<std::uint32_t>(state.range(0))).matrix;
  for (auto _ : state) benchmark::DoNotOptimize(coherence(m));
}
BENCHMARK(BM_ExtendedCoherence)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_Omp(benchmark::State& state) {
  const Eigen::MatrixXd phi = normalize(build_binary_matrix(euler_square(23, 10)));
  const OmpSolver solver(phi);
  const auto k = static_cast<std::size_t>(state.range(0));
  const SparseSignal x = gen_sparse_signal(529, k, 1);
  const Eigen::VectorXd y = phi * x.dense();
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(y, k, 1e-12 * y.norm()));
}
BENCHMARK(BM_Omp)->Arg(5)->Arg(20)->Arg(50);

static void BM_BasisPursuit(benchmark::State& state) {
  const Eigen::MatrixXd phi = normalize(build_binary_matrix(euler_square(11, 5)));
  const BasisPursuitSolver solver(phi);
  const SparseSignal x = gen_sparse_signal(121, static_cast<std::size_t>(state.range(0)), 2);
  const Eigen::VectorXd y = phi * x.dense();
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(y));
}
BENCHMARK(BM_BasisPursuit)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_HaarForward(benchmark::State& state) {
  const auto edge = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  std::vector<double> patch(edge * edge);
  for (auto& v : patch) v = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(haar_forward(patch, edge, haar_max_levels(edge)));
}
BENCHMARK(BM_HaarForward)->Arg(16)->Arg(32);
BENCHMARK_MAIN();
