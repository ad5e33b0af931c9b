#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "vdpzeno/coupled.hpp"
#include "vdpzeno/fock.hpp"
#include "vdpzeno/measurement.hpp"
#include "vdpzeno/oscillator.hpp"
#include "vdpzeno/phase_space.hpp"
#include "vdpzeno/rng.hpp"
#include "vdpzeno/spectral.hpp"

namespace {

const vdp::OscillatorParams kParams{1.0, 0.1, 0.005};

void BM_ComplexNormal(benchmark::State& state) {
  vdp::RandomStream rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng.complex_normal());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ComplexNormal);

void BM_EnsembleAdvance(benchmark::State& state) {
  auto ens = vdp::init_coherent({3.3, 0.0}, static_cast<std::size_t>(state.range(0)), 1);
  vdp::IntegratorConfig cfg;
  constexpr std::uint64_t kSteps = 100;
  for (auto _ : state) vdp::advance(ens, kParams, cfg, kSteps);
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<std::int64_t>(kSteps));
}
BENCHMARK(BM_EnsembleAdvance)->Arg(1000)->Arg(10000);

void BM_HeterodyneCollapse(benchmark::State& state) {
  auto ens = vdp::init_coherent({3.3, 0.0}, static_cast<std::size_t>(state.range(0)), 1);
  auto control = vdp::control_stream(1);
  for (auto _ : state) benchmark::DoNotOptimize(vdp::heterodyne_collapse(ens, control));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HeterodyneCollapse)->Arg(10000);

void BM_CoupledAdvance(benchmark::State& state) {
  vdp::coupled::CoupledParams p;
  auto ens = vdp::coupled::init_pairs(p, 1.5707963267948966, static_cast<std::size_t>(state.range(0)), 1);
  vdp::IntegratorConfig cfg;
  cfg.dt = 0.01;
  constexpr std::uint64_t kSteps = 100;
  for (auto _ : state) vdp::coupled::advance(ens, p, cfg, kSteps);
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<std::int64_t>(kSteps));
}
BENCHMARK(BM_CoupledAdvance)->Arg(1000);

void BM_WignerHistogram(benchmark::State& state) {
  const auto ens = vdp::init_coherent({3.3, 0.0}, 100000, 1);
  for (auto _ : state) benchmark::DoNotOptimize(vdp::wigner_histogram(ens.states(), 0.2, 10.0));
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_WignerHistogram);

void BM_FourierQ(benchmark::State& state) {
  std::vector<double> q(static_cast<std::size_t>(state.range(0)));
  for (std::size_t k = 0; k < q.size(); ++k) q[k] = std::cos(0.05 * static_cast<double>(k));
  for (auto _ : state) benchmark::DoNotOptimize(vdp::spectral::fourier_q(q, 0.05, 3.0));
}
BENCHMARK(BM_FourierQ)->Arg(12000);

void BM_LindbladRhs(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto rho = vdp::fock::DensityMatrix::coherent(dim, {1.5, 0.0});
  for (auto _ : state) benchmark::DoNotOptimize(vdp::fock::lindblad_rhs(rho.matrix(), kParams));
}
BENCHMARK(BM_LindbladRhs)->Arg(30)->Arg(50);

void BM_Displacement(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(vdp::fock::displacement({1.2, -0.7}, 50));
}
BENCHMARK(BM_Displacement);

void BM_WignerAt(benchmark::State& state) {
  const auto rho = vdp::fock::DensityMatrix::coherent(50, {2.0, 0.0});
  for (auto _ : state) benchmark::DoNotOptimize(vdp::fock::wigner_at(rho, {0.4, 0.3}));
}
BENCHMARK(BM_WignerAt);

}  // namespace

BENCHMARK_MAIN();
