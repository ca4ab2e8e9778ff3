// Parallel Monte Carlo kernel against the serial reference.
//   bench_montecarlo --benchmark_filter=BS
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "jscc/montecarlo.hpp"
#include "jscc/staircase.hpp"

using namespace jscc;

namespace {

struct Case {
  ChannelSpec spec;
  double b;
  std::vector<Transmission> tx;
};

Case bs_case(int mt, int mr) {
  const ChannelSpec spec(mt, mr);
  const auto alloc = bs_allocation(spec, 3.0, 3);
  Case c{spec, 3.0, {}};
  for (double db : {10.0, 20.0, 30.0}) c.tx.push_back(transmission_at(alloc, db, 0.01));
  return c;
}

SimulationConfig config(std::int64_t trials, int shards) {
  SimulationConfig cfg;
  cfg.trials = trials;
  cfg.seed = 1;
  cfg.shards = shards;
  return cfg;
}

void run(benchmark::State& state, bool parallel, int mt, int mr) {
  const Case c = bs_case(mt, mr);
  const auto trials = state.range(0);
  const auto cfg = config(trials, parallel ? omp_get_max_threads() : 1);
  for (auto _ : state) {
    auto out = parallel ? evaluate_transmissions(c.spec, c.b, c.tx, cfg)
                        : evaluate_transmissions_reference(c.spec, c.b, c.tx, cfg);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * trials * std::int64_t(c.tx.size()));
  state.counters["threads"] = cfg.shards;
}

void BM_BS_SISO_Parallel(benchmark::State& s) { run(s, true, 1, 1); }
void BM_BS_SISO_Reference(benchmark::State& s) { run(s, false, 1, 1); }
void BM_BS_2x2_Parallel(benchmark::State& s) { run(s, true, 2, 2); }
void BM_BS_2x2_Reference(benchmark::State& s) { run(s, false, 2, 2); }
void BM_BS_4x4_Parallel(benchmark::State& s) { run(s, true, 4, 4); }
void BM_BS_4x4_Reference(benchmark::State& s) { run(s, false, 4, 4); }

}  // namespace

BENCHMARK(BM_BS_SISO_Parallel)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BS_SISO_Reference)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BS_2x2_Parallel)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BS_2x2_Reference)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BS_4x4_Parallel)->Arg(1 << 14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BS_4x4_Reference)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
