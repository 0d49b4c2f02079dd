#include <benchmark/benchmark.h>

#include "floc/equilibrium.hpp"
#include "floc/slowfast.hpp"

namespace {

using namespace floc;

void BM_GammaScan(benchmark::State& state) {
  const Model m({1.0, 0.9, 1.0, 0.5, std::nullopt}, Monod{2.0, 1.0}, Monod{1.5, 0.8},
                AttachmentLaws(LinearTotal{4.0}, ConstantDetachment{1.0}));
  ScanOptions opts;
  opts.n_scan = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto scan = find_equilibria_distinct_D(m, opts);
    benchmark::DoNotOptimize(scan.equilibria.data());
  }
}
BENCHMARK(BM_GammaScan)->Arg(500)->Arg(2000)->Arg(8000)->Unit(benchmark::kMicrosecond);

void BM_EqualRateCoexistence(benchmark::State& state) {
  const Model m(ChemostatParams::equal(0.5, 2.0), Monod{1.0, 1.0}, Monod{0.7, 1.0},
                AttachmentLaws(LinearTotal{1.0}, ConstantDetachment{0.5}));
  for (auto _ : state) benchmark::DoNotOptimize(solve_coexistence_equal_D(m));
}
BENCHMARK(BM_EqualRateCoexistence)->Unit(benchmark::kMicrosecond);

void BM_PbarBisection(benchmark::State& state) {
  const auto laws = AttachmentLaws::custom([](double u, double v) { return u + v; }, ConstantDetachment{0.5});
  double x = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_pbar_bisection(x, laws));
    x = x < 100.0 ? x * 1.1 : 0.01;
  }
}
BENCHMARK(BM_PbarBisection);

}  // namespace
