#include <benchmark/benchmark.h>

#include <cmath>

#include "spinflip/field_synthesis.hpp"
#include "spinflip/invariant.hpp"
#include "spinflip/lowdin.hpp"
#include "spinflip/open_systems.hpp"

using namespace spinflip;

namespace {

const MaterialParams kMat = MaterialParams::gaas_default();

void BM_DesignConstruction(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(TrajectoryDesign::make(1.0, 0.15, kMat));
  }
}
BENCHMARK(BM_DesignConstruction);

void BM_FieldSamples(benchmark::State& state) {
  const auto d = TrajectoryDesign::make(1.0, 0.15, kMat);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_fields(d, static_cast<std::size_t>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FieldSamples)->Arg(101)->Arg(1001);

void BM_Schrodinger(benchmark::State& state) {
  const auto d = TrajectoryDesign::make(1.0, 0.15, kMat);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        propagate_schrodinger(d, SpinState::spin_up(), static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_Schrodinger)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_MasterDephasing(benchmark::State& state) {
  const auto d = TrajectoryDesign::make(1.0, 0.15, kMat);
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate_master(d, 0.01, 10000));
  }
}
BENCHMARK(BM_MasterDephasing)->Unit(benchmark::kMillisecond);

void BM_StochasticTrajectory(benchmark::State& state) {
  const auto d = TrajectoryDesign::make(1.0, 0.15, kMat);
  const NoiseParams np{std::sqrt(0.05), NoiseChannel::x_only, 42, 1};
  std::uint64_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sse_trajectory(d, np, 10000, k++, 10000));
  }
}
BENCHMARK(BM_StochasticTrajectory)->Unit(benchmark::kMillisecond);

void BM_B0Max(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_b0_max(1.0, kMat, 20.0));
  }
}
BENCHMARK(BM_B0Max)->Unit(benchmark::kMillisecond);

void BM_LowdinReduce(benchmark::State& state) {
  FourLevelModel m;
  m.e2 = 1.0;
  m.delta_z = 0.05;
  m.pbar_x = cplx(0.0, 0.01);
  m.pbar_y = cplx(0.0, 0.005);
  m.drive_b1 = 0.01;
  const auto p = partition(build_full_hamiltonian(m));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lowdin_reduce(p, m.e1));
  }
}
BENCHMARK(BM_LowdinReduce);

void BM_FullSpectrum(benchmark::State& state) {
  FourLevelModel m;
  m.e2 = 1.0;
  m.pbar_x = cplx(0.0, 0.01);
  m.drive_b1 = 0.01;
  const auto h = build_full_hamiltonian(m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(full_spectrum(h));
  }
}
BENCHMARK(BM_FullSpectrum);

}  // namespace
BENCHMARK_MAIN();
