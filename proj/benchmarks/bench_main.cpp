#include <benchmark/benchmark.h>

#include "slcpopt/bestslc.hpp"
#include "slcpopt/instance_gen.hpp"
#include "slcpopt/slc.hpp"

namespace {

using namespace slcpopt;

void BM_PolynomialEvaluate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Polynomial p = random_polynomial(n, 3, 0.5, 7);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 0.37);
  for (auto _ : state) benchmark::DoNotOptimize(p.evaluate(x));
}
BENCHMARK(BM_PolynomialEvaluate)->Arg(3)->Arg(6)->Arg(10);

void BM_ConstructDecomposition(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Polynomial p = random_polynomial(n, 3, 0.5, 11);
  for (auto _ : state) benchmark::DoNotOptimize(construct_slc(p, 3));
}
BENCHMARK(BM_ConstructDecomposition)->Arg(3)->Arg(6)->Arg(10);

void BM_RootRelaxation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Polynomial p = random_polynomial(n, 3, 0.5, 5);
  LiftedRegion region = generate_lifted_region(n, {}, 3);
  SolveOptions opts;
  opts.tol = 1e-5;
  for (auto _ : state) {
    DualModel model = build_best_slc_program(p, region, 3);
    benchmark::DoNotOptimize(solve(model.prog, opts));
  }
}
BENCHMARK(BM_RootRelaxation)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
