#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "posthoc/bounds.hpp"
#include "posthoc/calibration.hpp"
#include "posthoc/envelope.hpp"
#include "posthoc/simulation.hpp"

namespace {

using namespace posthoc;

Instance default_instance() {
  SimulationConfig config;
  return generate_instance(config, 0);
}

void BM_VStarForestTree(benchmark::State& state) {
  const auto instance = default_instance();
  const auto regions = build_tree_regions(12800, 7);
  const auto family = calibrate_family(regions, instance.pvalues, {0.05, regions.size(), ZetaMethod::Dkw});
  const auto completed = complete_family(family);
  std::mt19937_64 rng(1);
  std::vector<Index> chosen;
  for (Index i = 1; i <= 12800; ++i) {
    if (rng() % 2 == 0) chosen.push_back(i);
  }
  const Selection s(chosen);
  for (auto _ : state) benchmark::DoNotOptimize(v_star_forest(completed.family, completed.index, s));
}
BENCHMARK(BM_VStarForestTree)->Unit(benchmark::kMicrosecond);

void BM_CalibrateTree(benchmark::State& state) {
  const auto instance = default_instance();
  const auto regions = build_tree_regions(12800, 7);
  const CalibrationConfig config{0.05, regions.size(), ZetaMethod::Dkw};
  for (auto _ : state) benchmark::DoNotOptimize(calibrate_zetas(regions, instance.pvalues, config));
}
BENCHMARK(BM_CalibrateTree)->Unit(benchmark::kMillisecond);

void BM_TreeEnvelope(benchmark::State& state) {
  const auto instance = default_instance();
  const auto regions = build_tree_regions(12800, 7);
  const auto family = calibrate_family(regions, instance.pvalues, {0.05, regions.size(), ZetaMethod::Dkw});
  const ForestEvaluator evaluator(family);
  const auto order = topk_order(instance.pvalues);
  for (auto _ : state) benchmark::DoNotOptimize(evaluator.evaluate_topk(order, nullptr));
}
BENCHMARK(BM_TreeEnvelope)->Unit(benchmark::kMillisecond);

void BM_SimesEnvelope(benchmark::State& state) {
  const auto instance = default_instance();
  const SimesEvaluator evaluator(instance.pvalues, 0.05);
  const auto order = topk_order(instance.pvalues);
  for (auto _ : state) benchmark::DoNotOptimize(evaluator.evaluate_topk(order, nullptr));
}
BENCHMARK(BM_SimesEnvelope)->Unit(benchmark::kMillisecond);

void BM_Replicate(benchmark::State& state) {
  ExperimentConfig config;
  config.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(config));
}
BENCHMARK(BM_Replicate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
