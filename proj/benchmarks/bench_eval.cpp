#include <benchmark/benchmark.h>

#include "lognl/barriers.hpp"
#include "lognl/nonlocal_eval.hpp"

namespace {

using namespace lognl;

void BM_EvalLK(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  QuadratureConfig cfg;
  cfg.mode = state.range(1) ? QuadMode::Oracle : QuadMode::Fast;
  const KernelSpec K = sinlog_kernel();
  const FieldFunction u = gaussian_field(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(eval_LK(K, u, {0.1, 0.0}, N, cfg).value);
}
BENCHMARK(BM_EvalLK)->ArgsProduct({{1, 2}, {0, 1}})->ArgNames({"N", "oracle"});

void BM_EvalLogLap(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const QuadratureConfig cfg;
  const FieldFunction u = gaussian_field(1.0, 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(eval_loglap(u, {0.2, 0.0}, N, cfg).value);
}
BENCHMARK(BM_EvalLogLap)->Arg(1)->Arg(2)->ArgName("N");

void BM_VerifyBump(benchmark::State& state) {
  const QuadratureConfig cfg;
  const std::vector<double> radii{0.05, 0.005};
  for (auto _ : state) benchmark::DoNotOptimize(verify_bump(unit_kernel(), radii, 1, cfg).C_hat);
}
BENCHMARK(BM_VerifyBump)->Unit(benchmark::kMillisecond);

}  // namespace
