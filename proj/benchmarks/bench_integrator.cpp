#include <benchmark/benchmark.h>

#include "floc/multispecies.hpp"
#include "floc/slowfast.hpp"

namespace {

using namespace floc;

Model fig4(double eps) {
  return Model(ChemostatParams::equal(0.5, 2.0, eps), Monod{1.0, 1.0}, Monod{0.7, 1.0},
               AttachmentLaws(LinearTotal{1.0}, ConstantDetachment{0.5}));
}

void BM_FullModel(benchmark::State& state) {
  const double eps = 1.0 / static_cast<double>(state.range(0));
  const Model m = fig4(eps);
  std::size_t steps = 0;
  for (auto _ : state) {
    auto traj = simulate_full(m, {2.0, 0.05, 0.05}, 60.0);
    steps = traj.n_accepted;
    benchmark::DoNotOptimize(traj.data.data());
  }
  state.counters["steps"] = static_cast<double>(steps);
}
BENCHMARK(BM_FullModel)->Arg(1)->Arg(2)->Arg(10)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_ReducedModel(benchmark::State& state) {
  const ReducedModel rm(fig4(0.5));
  for (auto _ : state) {
    auto traj = simulate_reduced(rm, {2.0, 0.1}, 60.0);
    benchmark::DoNotOptimize(traj.data.data());
  }
}
BENCHMARK(BM_ReducedModel)->Unit(benchmark::kMicrosecond);

void BM_ReducedBisectionManifold(benchmark::State& state) {
  const Model m(ChemostatParams::equal(0.5, 2.0), Monod{1.0, 1.0}, Monod{0.7, 1.0},
                AttachmentLaws::custom([](double u, double v) { return u + v; }, ConstantDetachment{0.5}));
  const ReducedModel rm(m);
  for (auto _ : state) {
    auto traj = simulate_reduced(rm, {2.0, 0.1}, 60.0);
    benchmark::DoNotOptimize(traj.data.data());
  }
}
BENCHMARK(BM_ReducedBisectionManifold)->Unit(benchmark::kMicrosecond);

void BM_CompareSlowFast(benchmark::State& state) {
  const Model m = fig4(1.0);
  const std::vector<double> eps{2.0, 0.5, 0.1, 0.02};
  CompareOptions opts;
  opts.jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    auto report = compare_slow_fast(m, eps, {2.0, 0.05, 0.05}, 60.0, opts);
    benchmark::DoNotOptimize(report.runs.data());
  }
}
BENCHMARK(BM_CompareSlowFast)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_MultiSpecies(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<GrowthLaw> gu, gv;
  std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.1));
  for (std::size_t i = 0; i < n; ++i) {
    gu.emplace_back(Monod{1.0, 0.5 + 0.1 * static_cast<double>(i)});
    gv.emplace_back(Monod{0.2, 0.5 + 0.1 * static_cast<double>(i)});
    A[i][i] = 1.0;
  }
  const MultiSpeciesModel m(ChemostatParams::equal(0.5, 2.0), gu, gv, A, std::vector<double>(n, 0.5));
  std::vector<double> y0(n + 1, 0.1);
  y0[0] = 2.0;
  for (auto _ : state) {
    auto traj = simulate_multispecies(m, y0, 500.0);
    benchmark::DoNotOptimize(traj.data.data());
  }
}
BENCHMARK(BM_MultiSpecies)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

}  // namespace
