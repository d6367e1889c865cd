// Rollout collection throughput: serial reference vs OpenMP over workers.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "hlloco/ppo/trainer.hpp"
#include "hlloco/rigid_body/robot_model.hpp"

using namespace hlloco;

namespace {

void collect(benchmark::State& state, ppo::Execution exec) {
  const auto model = rigid_body::load_robot("rabbit");
  const int n_workers = static_cast<int>(state.range(0));
  const int steps = 64;
  std::mt19937_64 rng(1);
  const auto policy =
      ppo::Policy::create(env::kObsDim, env::kActDim, {128, 128}, 0.15, rng);
  const ppo::Normalizer normalizer(env::kObsDim);
  std::vector<ppo::Worker> workers;
  for (int i = 0; i < n_workers; ++i) {
    workers.emplace_back(env::EnvConfig{}, model, 100 + i);
  }
  for (auto _ : state) {
    auto out = ppo::collect_all(workers, policy, normalizer, steps, 0.99, 0.95,
                                exec);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * n_workers * steps);
  state.counters["threads"] = omp_get_max_threads();
}

void BM_CollectSerial(benchmark::State& s) { collect(s, ppo::Execution::kSerial); }
void BM_CollectParallel(benchmark::State& s) { collect(s, ppo::Execution::kParallel); }

}  // namespace

BENCHMARK(BM_CollectSerial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CollectParallel)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
