#include <benchmark/benchmark.h>

#include <filesystem>

#include "tfdash/adapter.hpp"
#include "tfdash/estimator.hpp"
#include "tfdash/metrics.hpp"
#include "tfdash/netsim.hpp"
#include "tfdash/prober.hpp"
#include "tfdash/scenario.hpp"

using namespace tfdash;

static void BM_CandidateScore(benchmark::State& state) {
  const BitrateLadder ladder;
  const PolicyParams p;
  double q = 7.0;
  for (auto _ : state) {
    q = 5.0 + (q > 24.0 ? 0.0 : q * 0.1);
    benchmark::DoNotOptimize(candidate_score(2350, 1750, q, 5, p, ladder));
  }
}
BENCHMARK(BM_CandidateScore);

static void BM_ScoreCandidateSet(benchmark::State& state) {
  const BitrateLadder ladder;
  const PolicyParams p;
  for (auto _ : state) {
    benchmark::DoNotOptimize(score_candidates(ladder, 2600, 1750, 14, 4, p));
  }
}
BENCHMARK(BM_ScoreCandidateSet);

static void BM_EstimatorUpdate(benchmark::State& state) {
  EstimatorState st{3000, 3000, true};
  double m = 1000.0;
  for (auto _ : state) {
    m = m > 5000 ? 1000.0 : m * 1.01;
    benchmark::DoNotOptimize(update_estimate(st, m, 0.5));
  }
}
BENCHMARK(BM_EstimatorUpdate);

static void BM_ProbeUpdate(benchmark::State& state) {
  ProberState st;
  for (auto _ : state) {
    benchmark::DoNotOptimize(probe_update(st, 3000, 1.25, 32));
  }
}
BENCHMARK(BM_ProbeUpdate);

static void BM_NextCompletionTime(benchmark::State& state) {
  const CapacitySchedule schedule(
      {{0, 8000}, {25, 4000}, {50, 7000}, {75, 2000}, {100, 4000}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(next_completion_time(40000, 3, schedule, 20.0));
  }
}
BENCHMARK(BM_NextCompletionTime);

static void BM_TwoClientScenario(benchmark::State& state) {
  const auto path =
      std::filesystem::path(TFDASH_SCENARIO_DIR) / "two-client-3000-1500-4000.json";
  ScenarioConfig cfg = load_scenario(path.string());
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_scenario(cfg));
  }
}
BENCHMARK(BM_TwoClientScenario)->Unit(benchmark::kMillisecond);

static void BM_Summarize(benchmark::State& state) {
  const auto path =
      std::filesystem::path(TFDASH_SCENARIO_DIR) / "two-client-3000-1500-4000.json";
  ScenarioConfig cfg = load_scenario(path.string());
  const SessionLog log = run_scenario(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(summarize(log, cfg.schedule));
  }
}
BENCHMARK(BM_Summarize)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
