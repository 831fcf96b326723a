#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "commands.hpp"
#include "techcycle/cycle.hpp"
#include "techcycle/growth_models.hpp"
#include "techcycle/regress.hpp"
#include "techcycle/synthlab.hpp"

using namespace techcycle;

static void BM_OlsSimple(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = u(rng);
    y[i] = 2 * x[i] + u(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(ols_simple(x, y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OlsSimple)->Range(8, 4096)->Complexity();

static void BM_TPValue(benchmark::State& state) {
  const int df = static_cast<int>(state.range(0));
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(t_p_value(t, df));
    t = t < 10 ? t + 0.37 : 0.1;
  }
}
BENCHMARK(BM_TPValue)->Arg(1)->Arg(23)->Arg(1000);

static void BM_FitLogistic(benchmark::State& state) {
  std::map<int, double> pts;
  const LogisticParams p{1000, 6, 0.5};
  for (int t = 0; t <= 40; ++t) pts[t] = logistic_value(p, t);
  const RevenueSeries s("s", std::nullopt, pts);
  for (auto _ : state) benchmark::DoNotOptimize(fit_logistic(s));
}
BENCHMARK(BM_FitLogistic);

static void BM_AggregateCycles(benchmark::State& state) {
  std::vector<CycleSummary> rows;
  for (int i = 0; i < state.range(0); ++i)
    rows.push_back(cycle_metrics(CycleEvents{"t", 1900 + i % 50, 1950 + i % 30, 1990 + i % 20, false}));
  for (auto _ : state) benchmark::DoNotOptimize(aggregate_cycles(rows));
}
BENCHMARK(BM_AggregateCycles)->Arg(6)->Arg(1000);

static void BM_RecoveryExperiment(benchmark::State& state) {
  const SyntheticScenario s{{1000, 16, 0.4}, {2000, 40, 0.8}, {0, 80}, 0.05, 42};
  for (auto _ : state) benchmark::DoNotOptimize(recovery_experiment(s, EarlyWindow{0.1}));
}
BENCHMARK(BM_RecoveryExperiment);

static void BM_StudyReport(benchmark::State& state) {
  auto cfg = cli::default_run_config();
  cli::apply_config_file(cfg, cli::default_data_dir() + "/riaa_study.cfg");
  for (auto _ : state) benchmark::DoNotOptimize(cli::build_study_report(cfg));
}
BENCHMARK(BM_StudyReport)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
