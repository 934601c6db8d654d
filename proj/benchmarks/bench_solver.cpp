#include <benchmark/benchmark.h>

#include <vector>

#include "lognl/solver.hpp"

namespace {

using namespace lognl;

Domain domain_for(int N) {
  return N == 1 ? Domain::interval(-0.25, 0.25) : Domain::ball({0.0, 0.0}, 0.25, 2);
}

// Argument: cells per diameter.
void BM_Assemble(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const Domain d = domain_for(N);
  const auto grid = build_grid(d, d.diameter() / static_cast<double>(state.range(1)));
  const ProblemSpec p = ProblemSpec::generic(unit_kernel(), d, constant_field(1.0));
  const QuadratureConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(assemble(p, grid, cfg).A.data());
  state.counters["nodes"] = static_cast<double>(grid->size());
}
BENCHMARK(BM_Assemble)
    ->Args({1, 100})
    ->Args({1, 400})
    ->Args({2, 8})
    ->Args({2, 16})
    ->ArgNames({"N", "cells"})
    ->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const Domain d = domain_for(1);
  const auto grid = build_grid(d, d.diameter() / static_cast<double>(state.range(0)));
  const StiffnessMatrix A =
      assemble(ProblemSpec::generic(unit_kernel(), d, constant_field(1.0)), grid, QuadratureConfig{});
  const std::vector<double> f(grid->size(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_system(A, f).report.residual_inf);
  state.counters["nodes"] = static_cast<double>(grid->size());
}
BENCHMARK(BM_Solve)->Arg(100)->Arg(400)->Arg(1600)->ArgName("cells")->Unit(benchmark::kMillisecond);

}  // namespace
