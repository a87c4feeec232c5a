#include <benchmark/benchmark.h>

#include "posim/estimators.hpp"
#include "posim/genmodel_one.hpp"
#include "posim/genmodel_two.hpp"
#include "posim/weights.hpp"

using namespace posim;

static void BM_SimulateStudyOne(benchmark::State& state) {
  StudyOneParams params;
  params.n = static_cast<std::int32_t>(state.range(0));
  std::uint64_t rep = 0;
  for (auto _ : state) {
    auto d = simulate_dataset_one(params, rep++, 1);
    benchmark::DoNotOptimize(d.rows.data());
  }
}
BENCHMARK(BM_SimulateStudyOne)->Arg(1000)->Arg(5000);

static void BM_SimulateStudyTwo(benchmark::State& state) {
  StudyTwoParams params;
  params.n = static_cast<std::int32_t>(state.range(0));
  std::uint64_t rep = 0;
  for (auto _ : state) {
    auto d = simulate_dataset_two(params, rep++, 1);
    benchmark::DoNotOptimize(d.rows.data());
  }
}
BENCHMARK(BM_SimulateStudyTwo)->Arg(1000)->Arg(10000);

static void BM_WeightsStudyOne(benchmark::State& state) {
  StudyOneParams params;
  params.n = 1000;
  const auto d = simulate_dataset_one(params, 0, 1);
  for (auto _ : state) {
    auto wt = estimate_weights_one(d, params.checkup_spacing);
    benchmark::DoNotOptimize(wt.rows.data());
  }
}
BENCHMARK(BM_WeightsStudyOne);

static void BM_LogitMsmFit(benchmark::State& state) {
  StudyOneParams params;
  params.n = 1000;
  const auto d = simulate_dataset_one(params, 0, 1);
  const auto wt = estimate_weights_one(d, params.checkup_spacing);
  for (auto _ : state) {
    auto fit = fit_logit_msm(d, wt, GForm::HavercroftD1AD3);
    benchmark::DoNotOptimize(fit.gamma_hat.data());
  }
}
BENCHMARK(BM_LogitMsmFit);

static void BM_AalenMsmFit(benchmark::State& state) {
  StudyTwoParams params;
  params.n = static_cast<std::int32_t>(state.range(0));
  const auto d = simulate_dataset_two(params, 0, 1);
  const auto wt = estimate_weights_two(d);
  for (auto _ : state) {
    auto fit = fit_aalen_msm(d, wt);
    benchmark::DoNotOptimize(fit.increments.data());
  }
}
BENCHMARK(BM_AalenMsmFit)->Arg(1000)->Arg(20000);

BENCHMARK_MAIN();
