#include <benchmark/benchmark.h>

#include "gfa/analytic.hpp"
#include "gfa/config.hpp"
#include "gfa/simulator.hpp"
#include "gfa/specfun.hpp"

namespace {

gfa::ScenarioConfig baseline(double gamma_db = -2.0) {
  gfa::ScenarioConfig cfg;
  cfg.gamma_th_db = gamma_db;
  return cfg;
}

void BM_LoadPmf(benchmark::State& state) {
  const gfa::specfun::LoadPmf pmf(0.4583);
  for (auto _ : state) {
    double acc = 0.0;
    for (int n = 0; n < 14; ++n) acc += pmf(n);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_LoadPmf);

void BM_Hyp2f1(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gfa::specfun::hyp2f1_interference(k, 4.0, 0.631));
  }
}
BENCHMARK(BM_Hyp2f1)->Arg(1)->Arg(4)->Arg(8);

void BM_AccessSuccessKrep(benchmark::State& state) {
  const gfa::ScenarioConfig cfg = baseline();
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gfa::analytic::access_success_krep(1, k, cfg, 1.0));
  }
}
BENCHMARK(BM_AccessSuccessKrep)->Arg(1)->Arg(4)->Arg(8);

void BM_FailureCurveProactive(benchmark::State& state) {
  const gfa::ScenarioConfig cfg = baseline();
  for (auto _ : state) {
    benchmark::DoNotOptimize(gfa::analytic::failure_curve_proactive(cfg, 8, 40));
  }
}
BENCHMARK(BM_FailureCurveProactive);

void BM_SimulateTrial(benchmark::State& state) {
  gfa::ScenarioConfig cfg = baseline();
  cfg.sim_area_km2 = 100.0;
  gfa::sim::SimOptions opts;
  opts.threads = 1;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.seed = seed++;
    benchmark::DoNotOptimize(
        gfa::sim::estimate_failure_curve(cfg, gfa::Scheme::krepetition(4), 20, 1, opts));
  }
}
BENCHMARK(BM_SimulateTrial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
