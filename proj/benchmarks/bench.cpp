#include <benchmark/benchmark.h>

#include "common/random_systems.hpp"
#include "lqo/io.hpp"

namespace {

using namespace lqo;

void BM_Expm(benchmark::State& state) {
  testing::Rng rng(1);
  const Matrix a = rng.stable(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expm(a, 0.5));
}
BENCHMARK(BM_Expm)->Arg(6)->Arg(20)->Arg(60);

void BM_Sylvester(benchmark::State& state) {
  testing::Rng rng(2);
  const Eigen::Index n = state.range(0);
  const Matrix a = rng.stable(n);
  const Matrix b = rng.stable(n / 4 + 1).transpose();
  const Matrix c = rng.normal(n, b.rows());
  for (auto _ : state) benchmark::DoNotOptimize(solve_sylvester(a, b, c));
}
BENCHMARK(BM_Sylvester)->Arg(20)->Arg(60)->Arg(120);

void BM_CrossGramians(benchmark::State& state) {
  testing::Rng rng(3);
  const LqoSystem h = rng.system(state.range(0), 1, 2);
  const LqoSystem r = rng.system(4, 1, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cross_gramians(h, r, TimeInterval(0.1, 1.0)).qt);
  }
}
BENCHMARK(BM_CrossGramians)->Arg(20)->Arg(60);

void BM_TlhnoiaThreeMass(benchmark::State& state) {
  const LqoSystem full = load_system(LQO_DATA_DIR "/three_mass.json");
  const LqoSystem init = load_system(LQO_DATA_DIR "/three_mass_init.json", false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tlhnoia(full, init, TimeInterval::finite(0.5)).iterations);
  }
}
BENCHMARK(BM_TlhnoiaThreeMass)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
