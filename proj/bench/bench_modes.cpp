#include <benchmark/benchmark.h>

#include "fraclab/acceptance.hpp"
#include "fraclab/energy.hpp"
#include "fraclab/model_geometry.hpp"
#include "fraclab/routes.hpp"
#include "fraclab/scattering.hpp"

using namespace fraclab;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "openmp"); }

void BM_ExtensionApply(benchmark::State& state) {
  const auto f = random_field(static_cast<int>(state.range(1)), 0);
  const FracParams p(2, 0.75);
  for (auto _ : state) benchmark::DoNotOptimize(extension_apply(f, p, {}, exec_of(state)));
  label(state);
}
BENCHMARK(BM_ExtensionApply)->ArgsProduct({{0, 1}, {16, 32}})->Unit(benchmark::kMillisecond);

void BM_ExtensionApplyFD(benchmark::State& state) {
  const auto f = random_field(16, 0);
  const FracParams p(2, 0.3);
  ExtensionOptions o;
  o.method = SolveMethod::FiniteDifference;
  for (auto _ : state) benchmark::DoNotOptimize(extension_apply(f, p, o, exec_of(state)));
  label(state);
}
BENCHMARK(BM_ExtensionApplyFD)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ScatteringApply(benchmark::State& state) {
  const auto f = random_field(32, 0);
  const FracParams p(4, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(scattering_apply(f, p, {}, exec_of(state)));
  label(state);
}
BENCHMARK(BM_ScatteringApply)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EnergyOrder2(benchmark::State& state) {
  const auto f = random_field(16, 0);
  const FracParams p(4, 1.25);
  EnergyOptions o;
  o.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(energy_order2(f, p, o));
  label(state);
}
BENCHMARK(BM_EnergyOrder2)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const auto f = random_field(static_cast<int>(state.range(0)), 0);
  for (auto _ : state) benchmark::DoNotOptimize(fractional_multiplier_apply(f, 0.75));
}
BENCHMARK(BM_Oracle)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_ModelProfile(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(solve_model_profile(4, 1.5));
}
BENCHMARK(BM_ModelProfile)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
