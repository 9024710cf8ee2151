#include <benchmark/benchmark.h>

#include "sdet/boundary.hpp"
#include "sdet/divergence.hpp"
#include "sdet/hctest.hpp"
#include "sdet/sim.hpp"

using namespace sdet;

namespace {

void BM_BetaSharpIdj(benchmark::State& state) {
  FamilyParams p;
  p.r = 0.4;
  const auto alpha = alpha_family(Family::idj, p);
  ScanOptions opts;
  opts.points = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(beta_sharp(alpha, opts).beta);
}
BENCHMARK(BM_BetaSharpIdj)->Arg(2001)->Arg(20001)->Arg(200001);

void BM_CheckAdmissible(benchmark::State& state) {
  FamilyParams p;
  p.r = 0.3;
  p.sigma2 = 1.5;
  const auto alpha = alpha_family(Family::hetero, p);
  for (auto _ : state) benchmark::DoNotOptimize(check_admissible(alpha).admissible());
}
BENCHMARK(BM_CheckAdmissible);

void BM_HcAchievableSweep(benchmark::State& state) {
  FamilyParams p;
  p.r = 0.3;
  const auto alpha = alpha_family(Family::idj, p);
  for (auto _ : state) benchmark::DoNotOptimize(hc_achievable_boundary(alpha, HcBoundaryMethod::sweep).beta);
}
BENCHMARK(BM_HcAchievableSweep);

void BM_HcStatistic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RngStream s(1);
  const auto y = sample(Distribution::gaussian(), n, s);
  const auto q = Distribution::gaussian();
  for (auto _ : state) benchmark::DoNotOptimize(hc_statistic(y, q).statistic);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_HcStatistic)->RangeMultiplier(10)->Range(1000, 100000);

void BM_LrTest(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SparseMixture mix(Distribution::gaussian(), Distribution::gaussian(mu_from_r(double(n), 0.5), 1),
                          epsilon_from_beta(double(n), 0.6));
  RngStream s(2);
  const auto y = sample(mix, n, s);
  for (auto _ : state) benchmark::DoNotOptimize(lr_test(y, mix).log_lr);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_LrTest)->RangeMultiplier(10)->Range(1000, 100000);

void BM_SampleMixture(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SparseMixture mix(Distribution::gaussian(), Distribution::gaussian(3, 1), 0.01);
  std::vector<double> out(n);
  RngStream s(3);
  for (auto _ : state) {
    sample_into(mix, out, s);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_SampleMixture)->Arg(100000);

void BM_GaussianHellinger(benchmark::State& state) {
  const auto p = Distribution::gaussian();
  const auto q = Distribution::gaussian(1.5, 1.2);
  for (auto _ : state) benchmark::DoNotOptimize(hellinger_sq(p, q).value);
}
BENCHMARK(BM_GaussianHellinger);

void BM_PhaseCell(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.beta_grid = {0.6};
  cfg.r_grid = {0.5};
  cfg.n_list = {10000};
  cfg.replicates = 20;
  cfg.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_cell(cfg, 0, 0, 0, TestKind::hc).total_error);
}
BENCHMARK(BM_PhaseCell)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
