#include <benchmark/benchmark.h>

#include "epictrl/controller.hpp"
#include "epictrl/dynamics.hpp"
#include "epictrl/geometry.hpp"
#include "epictrl/rate_model.hpp"

namespace {

using namespace epictrl;

ModelInstance behavioral_model() {
  return ModelInstance(linear_damped_rate(BSpec::affine(0.0, 0.35), 1.0), 0.05);
}

const GeometryCache& shared_geometry() {
  static GeometryCache g = compute_separatrix(behavioral_model(), 0.2, {});
  return g;
}

void bm_free_flow(benchmark::State& state) {
  ModelInstance m = behavioral_model();
  for (auto _ : state) {
    Trajectory tr =
        simulate(m, ControlSignal::zero(), {0.9, 0.05}, {}, StopCondition::at_time(20.0));
    benchmark::DoNotOptimize(tr.final_state());
    state.SetItemsProcessed(state.items_processed() + static_cast<std::int64_t>(tr.size()));
  }
}
BENCHMARK(bm_free_flow)->Unit(benchmark::kMillisecond);

void bm_separatrix_build(benchmark::State& state) {
  ModelInstance m = behavioral_model();
  for (auto _ : state) {
    GeometryCache g = compute_separatrix(m, 0.2, {});
    benchmark::DoNotOptimize(g.yhat);
  }
}
BENCHMARK(bm_separatrix_build)->Unit(benchmark::kMillisecond);

void bm_value_query(benchmark::State& state) {
  const GeometryCache& g = shared_geometry();
  for (auto _ : state) {
    ValueQuery q = value_function(g, {0.85, 0.1}, {});
    benchmark::DoNotOptimize(q.value);
  }
}
BENCHMARK(bm_value_query)->Unit(benchmark::kMillisecond);

void bm_h_partials(benchmark::State& state) {
  const GeometryCache& g = shared_geometry();
  for (auto _ : state) {
    HPartials p = h_partials(g, {0.85, 0.1}, {});
    benchmark::DoNotOptimize(p.hy);
  }
}
BENCHMARK(bm_h_partials)->Unit(benchmark::kMillisecond);

void bm_threshold_ride(benchmark::State& state) {
  const GeometryCache& g = shared_geometry();
  for (auto _ : state) {
    FillingTheBoxRun run = run_filling_the_box(g, {0.9, 0.05}, {});
    benchmark::DoNotOptimize(run.cost);
  }
}
BENCHMARK(bm_threshold_ride)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
