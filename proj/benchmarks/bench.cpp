#include <benchmark/benchmark.h>

#include "tauber/audit.hpp"
#include "tauber/density.hpp"
#include "tauber/game.hpp"
#include "tauber/matrix_game.hpp"
#include "tauber/rng.hpp"
#include "tauber/valuation.hpp"

namespace {

using namespace tauber;

void BM_MatrixValue(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Xoshiro256pp rng(7);
  MatrixGame g;
  g.rows = n;
  g.cols = n;
  g.entries.resize(static_cast<std::size_t>(n) * n);
  for (auto& e : g.entries) e = rng.next_double();
  for (auto _ : state) {
    auto sol = matrix_value(g);
    benchmark::DoNotOptimize(sol.value);
  }
}
BENCHMARK(BM_MatrixValue)->Arg(2)->Arg(4)->Arg(6);

void BM_ValueBackwardAbel(benchmark::State& state) {
  const auto game = builtin("ergodic3");
  const auto rho = Density::exponential(1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) {
    auto bracket = value_backward(game, rho, 1e-9);
    benchmark::DoNotOptimize(bracket.lo[0]);
  }
}
BENCHMARK(BM_ValueBackwardAbel)->Arg(16)->Arg(256);

void BM_L1Distance(benchmark::State& state) {
  const auto rho = Density::exponential(1.0);
  const auto nu = Density::power(1.0, 1.0, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(l1_distance(rho, nu));
  }
}
BENCHMARK(BM_L1Distance);

void BM_StageWeights(benchmark::State& state) {
  const auto rho = Density::power(1.0, 1.0, 2.0);
  for (auto _ : state) {
    auto sw = stage_weights(rho, static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(sw.tail);
  }
}
BENCHMARK(BM_StageWeights)->Arg(1024)->Arg(65536);

void BM_PcApproximate(benchmark::State& state) {
  const auto rho = Density::exponential(1.0);
  for (auto _ : state) {
    auto approx = pc_approximate(rho, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(approx.l1_error);
  }
}
BENCHMARK(BM_PcApproximate)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
