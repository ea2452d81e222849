// Serial reference solvers against the planned / parallel ones on the same data.
#include <benchmark/benchmark.h>

#include <memory>
#include <numbers>
#include <random>

#include "wigner/dynamics.hpp"
#include "wigner/kernels.hpp"
#include "wigner/parallel.hpp"
#include "wigner/reference.hpp"

using namespace wigner;

namespace {

constexpr double kPi = std::numbers::pi;

GridPtr grid_2d(int nk) { return make_phase_grid(-30.0, 30.0, 20, 25, -kPi, kPi, nk); }
GridPtr grid_4d() { return make_phase_grid(-10.0, 10.0, 5, 9, -kPi, kPi, 16); }

template <class State>
State filled(const GridPtr& g) {
  State s(g);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& v : s.values()) v = u(rng);
  return s;
}

void set_threads(const benchmark::State& st) { set_thread_count(static_cast<int>(st.range(1))); }

void BM_advect_reference(benchmark::State& st) {
  auto s = filled<WignerState>(grid_2d(static_cast<int>(st.range(0))));
  for (auto _ : st) {
    reference::advect(s, PhysicalConstants{}, 0.01);
    benchmark::DoNotOptimize(s.values().data());
  }
}

void BM_advect_planned(benchmark::State& st) {
  set_threads(st);
  auto s = filled<WignerState>(grid_2d(static_cast<int>(st.range(0))));
  Advector adv(s.grid_ptr(), PhysicalConstants{});
  adv.apply(s, 0.01);  // plan built outside the timing loop
  for (auto _ : st) {
    adv.apply(s, 0.01);
    benchmark::DoNotOptimize(s.values().data());
  }
}

void BM_kernel_reference(benchmark::State& st) {
  auto s = filled<WignerState>(grid_2d(static_cast<int>(st.range(0))));
  const KernelTable table = kernel_coefficients(DeltaPotential{1.0}, s.grid_ptr(), PhysicalConstants{});
  for (auto _ : st) benchmark::DoNotOptimize(reference::apply_kernel(s, table, 0.01));
}

void BM_kernel_fft(benchmark::State& st) {
  set_threads(st);
  auto s = filled<WignerState>(grid_2d(static_cast<int>(st.range(0))));
  auto table = std::make_shared<const KernelTable>(
      kernel_coefficients(DeltaPotential{1.0}, s.grid_ptr(), PhysicalConstants{}));
  KernelStage stage(table);
  stage.apply(s, 0.01);
  for (auto _ : st) {
    stage.apply(s, 0.01);
    benchmark::DoNotOptimize(s.values().data());
  }
}

void BM_advect4_reference(benchmark::State& st) {
  auto s = filled<WignerState4>(grid_4d());
  for (auto _ : st) {
    reference::advect(s, PhysicalConstants{}, 0.01);
    benchmark::DoNotOptimize(s.values().data());
  }
}

void BM_advect4_planned(benchmark::State& st) {
  set_threads(st);
  auto s = filled<WignerState4>(grid_4d());
  Advector adv(s.grid_ptr(), PhysicalConstants{});
  adv.apply(s, 0.01);
  for (auto _ : st) {
    adv.apply(s, 0.01);
    benchmark::DoNotOptimize(s.values().data());
  }
}

}  // namespace

BENCHMARK(BM_advect_reference)->Args({128, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_advect_planned)->ArgsProduct({{128}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_kernel_reference)->Args({128, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kernel_fft)->ArgsProduct({{128}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_advect4_reference)->Args({16, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_advect4_planned)->ArgsProduct({{16}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
