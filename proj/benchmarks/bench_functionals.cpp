#include <benchmark/benchmark.h>

#include "horo/functionals.hpp"
#include "horo/lab.hpp"
#include "horo/witnesses.hpp"

namespace {

using namespace horo;

void BM_EvaluateInternal(benchmark::State& state) {
  const auto y = l1_contrast_sequences(static_cast<std::uint64_t>(state.range(0))).second;
  const auto probes = random_probes({});
  const PreparedInternal h(1.0, y);
  for (auto _ : state) {
    for (const auto& x : probes) benchmark::DoNotOptimize(h(x));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(probes.size()));
}
BENCHMARK(BM_EvaluateInternal)->RangeMultiplier(8)->Range(16, 4096);

void BM_EvaluateFamily(benchmark::State& state) {
  PropsOptions o;
  o.families = {static_cast<Family>(state.range(0))};
  const auto battery = generate_battery(o);
  const auto probes = random_probes({});
  for (auto _ : state) {
    for (const auto& f : battery) {
      for (const auto& x : probes) benchmark::DoNotOptimize(evaluate(f, x));
    }
  }
  state.SetLabel(family_name(*o.families.begin()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(battery.size() * probes.size()));
}
BENCHMARK(BM_EvaluateFamily)->DenseRange(0, 3);

void BM_RunConvergence(benchmark::State& state) {
  FunctionalSampler sampler(kDefaultSeed);
  const MetricFunctional f = state.range(0) == 0 ? MetricFunctional(sampler.l1_limit())
                                                 : MetricFunctional(sampler.linear(2.0));
  const auto probes = random_probes({});
  const auto schedule = WitnessSchedule::default_schedule();
  for (auto _ : state) benchmark::DoNotOptimize(run_convergence(f, probes, schedule, 1e-6));
  state.SetLabel(family_name(f.family()));
}
BENCHMARK(BM_RunConvergence)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_PropertySuites(benchmark::State& state) {
  PropsOptions o;
  for (auto _ : state) benchmark::DoNotOptimize(run_property_suites(o));
}
BENCHMARK(BM_PropertySuites)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
