// Microbenchmarks for the simulation kernels that dominate sweep and
// optimization runtimes.

#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "vqn/ansatz.hpp"
#include "vqn/hamiltonian.hpp"
#include "vqn/noise.hpp"
#include "vqn/optimize.hpp"
#include "vqn/rng.hpp"
#include "vqn/state.hpp"

using namespace vqn;

namespace {

std::vector<double> random_params(int count, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::vector<double> params(static_cast<std::size_t>(count));
  for (double& p : params) p = uniform_in(rng, 0.0, 2 * std::numbers::pi);
  return params;
}

void BM_ApplyGateSingleQubit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto psi = StateVector::all_plus(n);
  const auto x = PauliString::single(n, n / 2, PauliOp::X);
  for (auto _ : state) {
    apply_gate_inplace(psi, x, 0.123);
    benchmark::DoNotOptimize(psi.amplitudes().data());
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_ApplyGateSingleQubit)->Arg(6)->Arg(10)->Arg(14);

void BM_ApplyGateTwoQubit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto psi = StateVector::all_plus(n);
  const auto xx = PauliString(n, {{0, PauliOp::X}, {n - 1, PauliOp::X}});
  for (auto _ : state) {
    apply_gate_inplace(psi, xx, 0.123);
    benchmark::DoNotOptimize(psi.amplitudes().data());
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_ApplyGateTwoQubit)->Arg(6)->Arg(10)->Arg(14);

void BM_CheckerboardCircuit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto ansatz = checkerboard(n, 4);
  const auto params = random_params(ansatz.circuit.num_params, 7);
  for (auto _ : state) {
    auto psi = run_circuit(ansatz.circuit, params);
    benchmark::DoNotOptimize(psi.amplitudes().data());
  }
}
BENCHMARK(BM_CheckerboardCircuit)->Arg(6)->Arg(10);

void BM_IsingExpectation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto h = build_ising(n, 1.0);
  const auto psi = StateVector::all_plus(n);
  for (auto _ : state) benchmark::DoNotOptimize(expectation(psi, h));
}
BENCHMARK(BM_IsingExpectation)->Arg(6)->Arg(10)->Arg(14);

void BM_NoisyGateChannel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto rho = DensityMatrix::from_state(StateVector::all_plus(n));
  const auto xx = PauliString(n, {{0, PauliOp::X}, {n - 1, PauliOp::X}});
  for (auto _ : state) {
    apply_noisy_gate_channel_inplace(rho, xx, 0.4, 0.01);
    benchmark::DoNotOptimize(rho.data().data());
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << (2 * n)));
}
BENCHMARK(BM_NoisyGateChannel)->Arg(4)->Arg(6)->Arg(8);

void BM_AdjointGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto ansatz = checkerboard(n, 4);
  const auto h = build_ising(n, 1.0);
  const auto params = random_params(ansatz.circuit.num_params, 11);
  for (auto _ : state) {
    auto grad = energy_gradient_adjoint(ansatz.circuit, ansatz.map, params, h);
    benchmark::DoNotOptimize(grad.data());
  }
}
BENCHMARK(BM_AdjointGradient)->Arg(6)->Arg(8);

void BM_McNoisySample(benchmark::State& state) {
  const int n = 6;
  const auto ansatz = checkerboard(n, 4);
  const auto h = build_ising(n, 1.0);
  const auto params = random_params(ansatz.circuit.num_params, 13);
  const auto spec =
      NoiseSpec::uniform(0.05, NoiseGrouping::PerGate, ansatz.circuit.gate_count());
  std::uint64_t sample = 0;
  for (auto _ : state) {
    auto rng = make_rng(derive_seed(17, sample++));
    const auto delta = sample_delta(spec, rng);
    auto psi = run_circuit_with_offsets(ansatz.circuit, params, delta);
    benchmark::DoNotOptimize(expectation(psi, h));
  }
}
BENCHMARK(BM_McNoisySample);

} // namespace

BENCHMARK_MAIN();
