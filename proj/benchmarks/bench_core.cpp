#include <benchmark/benchmark.h>

#include "rabiphase/bessel.hpp"
#include "rabiphase/engines.hpp"
#include "rabiphase/model.hpp"
#include "rabiphase/propagator.hpp"
#include "rabiphase/wseries.hpp"

using namespace rabiphase;

namespace {

void BM_BesselJ(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  double z = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bessel_j(n, z));
    z = z < 10.0 ? z + 0.01 : 0.1;
  }
}
BENCHMARK(BM_BesselJ)->Arg(0)->Arg(1)->Arg(5);

void BM_SolveXi(benchmark::State& state) {
  const DriveParams p = DriveParams::in_omega_units(2.9, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_xi(p));
}
BENCHMARK(BM_SolveXi);

void BM_PropagatePeriod(benchmark::State& state) {
  const DriveParams p = DriveParams::in_omega_units(2.9, 1.0);
  const HamiltonianFn h = [p](double t) { return hamiltonian_lab(p, t); };
  const double dt = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(propagate(h, p, {dt, 1, 16}).final_u());
  state.SetLabel("dt*omega = 1/" + std::to_string(state.range(0)));
}
BENCHMARK(BM_PropagatePeriod)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_WSeries(benchmark::State& state) {
  const DriveParams p = DriveParams::in_omega_units(4.9, 1.0);
  const RenormParams r = solve_xi(p);
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(w_series_at_T(p, r, grid));
}
BENCHMARK(BM_WSeries)->Arg(20000)->Arg(50000)->Unit(benchmark::kMillisecond);

void BM_Engine(benchmark::State& state) {
  const auto e = static_cast<Engine>(state.range(0));
  const DriveParams p = DriveParams::in_omega_units(2.9, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(run_engine(e, p));
  state.SetLabel(std::string(engine_name(e)));
}
BENCHMARK(BM_Engine)
    ->Arg(static_cast<int>(Engine::exact))
    ->Arg(static_cast<int>(Engine::chrw))
    ->Arg(static_cast<int>(Engine::pt3))
    ->Arg(static_cast<int>(Engine::pt5))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
