#include <benchmark/benchmark.h>

#include "richards/adjoint.hpp"
#include "richards/forward.hpp"
#include "richards/optim.hpp"
#include "richards/scenario.hpp"

namespace {

richards::Scenario sized_ex1(int nz, int nt) {
  auto s = richards::builtin_scenario("haverkamp-ex1");
  s.grid.Nz = nz;
  s.grid.Nt = nt;
  return s;
}

void BM_ForwardSolve(benchmark::State& state) {
  const auto s = sized_ex1(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto problem = s.problem();
  const auto u = s.initial_control();
  for (auto _ : state) {
    benchmark::DoNotOptimize(problem.solve(u));
  }
}
BENCHMARK(BM_ForwardSolve)->Args({71, 121})->Args({141, 241})->Args({201, 201})
    ->Unit(benchmark::kMillisecond);

void BM_AdjointSolve(benchmark::State& state) {
  const auto s = sized_ex1(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto problem = s.problem();
  const auto theta = problem.solve(s.initial_control());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        richards::solve_adjoint(problem.soil, problem.uptake, problem.reg, theta));
  }
}
BENCHMARK(BM_AdjointSolve)->Args({71, 121})->Args({141, 241})->Unit(benchmark::kMillisecond);

void BM_ReducedCost(benchmark::State& state) {
  const auto s = sized_ex1(71, 121);
  const auto problem = s.problem();
  const auto u = s.initial_control();
  for (auto _ : state) {
    benchmark::DoNotOptimize(richards::reduced_cost(problem, u));
  }
}
BENCHMARK(BM_ReducedCost)->Unit(benchmark::kMillisecond);

void BM_PgdIteration(benchmark::State& state) {
  auto s = sized_ex1(71, 121);
  s.pgd.maxit = 1;
  const auto problem = s.problem();
  for (auto _ : state) {
    benchmark::DoNotOptimize(richards::pgd(problem, s.pgd, s.initial_control()));
  }
}
BENCHMARK(BM_PgdIteration)->Unit(benchmark::kMillisecond);

}  // namespace
