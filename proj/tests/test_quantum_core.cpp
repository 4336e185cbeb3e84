#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"

#include "vqn/ansatz.hpp"
#include "vqn/circuit.hpp"
#include "vqn/constants.hpp"
#include "vqn/hamiltonian.hpp"
#include "vqn/spectrum.hpp"
#include "vqn/state.hpp"

using namespace vqn;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("apply_gate basics") {
  const auto x0 = PauliString::single(1, 0, PauliOp::X);

  SUBCASE("zero angle is the identity") {
    const auto out = apply_gate(StateVector::all_zero(1), x0, 0.0);
    CHECK(out.amp(0).real() == Approx(1.0));
    CHECK(std::abs(out.amp(1)) == Approx(0.0));
  }

  SUBCASE("angle pi/2 maps |0> to i|1>") {
    const auto out = apply_gate(StateVector::all_zero(1), x0, kPi / 2);
    CHECK(std::abs(out.amp(0)) < 1e-15);
    CHECK(out.amp(1).real() == Approx(0.0).epsilon(1e-12));
    CHECK(out.amp(1).imag() == Approx(1.0));
  }

  SUBCASE("ZZ on |01> accumulates phase exp(-i theta)") {
    // |01> is a (-1)-eigenvector of Z (x) Z; the dense 4x4 exponential oracle
    // confirms the phase.
    const auto zz = PauliString(2, {{0, PauliOp::Z}, {1, PauliOp::Z}});
    for (double theta : {0.3, 1.1, 2.9}) {
      const auto in = StateVector::basis_state(2, 1); // qubit0 = 1, qubit1 = 0
      const auto out = apply_gate(in, zz, theta);
      const oracles::Vector expected =
          oracles::expm_i_hermitian(oracles::pauli_matrix(zz), theta) * oracles::to_eigen(in);
      CHECK(oracles::state_distance(out, expected) < 1e-12);
      CHECK(out.amp(1).real() == Approx(std::cos(theta)));
      CHECK(out.amp(1).imag() == Approx(-std::sin(theta)));
    }
  }

  SUBCASE("dimension mismatch throws") {
    auto psi = StateVector::all_zero(2);
    CHECK_THROWS_AS(apply_gate(psi, x0, 0.1), std::invalid_argument);
  }
}

TEST_CASE("apply_gate matches the dense exponential on random inputs") {
  auto rng = make_rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto a = oracles::random_pauli(n, rng);
    const auto psi = oracles::random_state(n, rng);
    const double theta = uniform_in(rng, -kPi, kPi);
    const auto out = apply_gate(psi, a, theta);
    const oracles::Vector expected =
        oracles::expm_i_hermitian(oracles::pauli_matrix(a), theta) * oracles::to_eigen(psi);
    CHECK(oracles::state_distance(out, expected) < 1e-12);
  }
}

TEST_CASE("norm preservation over 1000 random gate applications") {
  auto rng = make_rng(11);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const auto a = oracles::random_pauli(n, rng);
    auto psi = oracles::random_state(n, rng);
    apply_gate_inplace(psi, a, uniform_in(rng, -2 * kPi, 2 * kPi));
    worst = std::max(worst, std::abs(psi.norm() - 1.0));
  }
  CHECK(worst < kNumericTolerance);
}

TEST_CASE("Pauli strings are involutory") {
  auto rng = make_rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const auto a = oracles::random_pauli(n, rng);
    const auto psi = oracles::random_state(n, rng);
    const auto twice = apply_pauli(apply_pauli(psi, a), a);
    double dist = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i)
      dist = std::max(dist, std::abs(twice.amp(i) - psi.amp(i)));
    CHECK(dist < 1e-12);
  }
}

TEST_CASE("gate split identity exp(iA(t+d)) = cos d exp(iAt) + sin d exp(iA(t+pi/2))") {
  auto rng = make_rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto a = oracles::random_pauli(n, rng);
    const auto psi = oracles::random_state(n, rng);
    const double theta = uniform_in(rng, -kPi, kPi);
    const double delta = uniform_in(rng, -kPi, kPi);
    const auto lhs = apply_gate(psi, a, theta + delta);
    const auto base = apply_gate(psi, a, theta);
    const auto shifted = apply_gate(psi, a, theta + kPi / 2);
    double dist = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
      const cdouble rhs = std::cos(delta) * base.amp(i) + std::sin(delta) * shifted.amp(i);
      dist = std::max(dist, std::abs(lhs.amp(i) - rhs));
    }
    CHECK(dist < 1e-12);
  }
}

TEST_CASE("run_circuit") {
  SUBCASE("empty gate list returns the initial state") {
    Circuit c;
    c.num_qubits = 3;
    c.num_params = 0;
    const auto psi = run_circuit(c, {});
    CHECK(psi.amp(0).real() == Approx(1.0));
  }

  SUBCASE("single X gate at pi/4 prepares (|0> + i|1>)/sqrt(2)") {
    Circuit c;
    c.num_qubits = 1;
    c.num_params = 1;
    c.gates.push_back({PauliString::single(1, 0, PauliOp::X), 0, 1.0, 0.0});
    const std::vector<double> params{kPi / 4};
    const auto psi = run_circuit(c, params);
    CHECK(psi.amp(0).real() == Approx(1.0 / std::sqrt(2.0)));
    CHECK(psi.amp(1).imag() == Approx(1.0 / std::sqrt(2.0)));
  }

  SUBCASE("QAOA circuit at gamma = beta = 0 keeps |+>^n") {
    const Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
    const auto ansatz = qaoa_build(build_maxcut(g), 2, QaoaMode::Decomposed);
    const std::vector<double> zeros(static_cast<std::size_t>(ansatz.circuit.num_params), 0.0);
    const auto psi = run_circuit(ansatz.circuit, zeros);
    const double amp = 1.0 / std::sqrt(8.0);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
      CHECK(psi.amp(i).real() == Approx(amp));
      CHECK(std::abs(psi.amp(i).imag()) < 1e-15);
    }
  }

  SUBCASE("parameter length mismatch throws") {
    Circuit c;
    c.num_qubits = 1;
    c.num_params = 2;
    const std::vector<double> params{0.1};
    CHECK_THROWS_AS(run_circuit(c, params), std::invalid_argument);
  }
}

TEST_CASE("expectation") {
  const Hamiltonian hz(1, {{1.0, PauliString::single(1, 0, PauliOp::Z)}});

  CHECK(expectation(StateVector::all_zero(1), hz) == Approx(1.0));
  CHECK(expectation(StateVector::all_plus(1), hz) == Approx(0.0).epsilon(1e-12));

  SUBCASE("cos(t)|0> + i sin(t)|1> gives cos(2t)") {
    for (double t : {0.2, 0.7, 1.9}) {
      const auto psi = StateVector::from_amplitudes(
          1, {cdouble(std::cos(t), 0.0), cdouble(0.0, std::sin(t))});
      CHECK(expectation(psi, hz) == Approx(std::cos(2 * t)).epsilon(1e-12));
    }
  }

  SUBCASE("matches the dense oracle on random states and Hamiltonians") {
    auto rng = make_rng(23);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 3);
      const auto h = oracles::random_hamiltonian(n, 4, rng);
      const auto psi = oracles::random_state(n, rng);
      const auto v = oracles::to_eigen(psi);
      const double expected = (v.adjoint() * oracles::hamiltonian_matrix(h) * v)(0).real();
      CHECK(expectation(psi, h) == Approx(expected).epsilon(1e-10));
    }
  }

  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(expectation(StateVector::all_zero(2), hz), std::invalid_argument);
  }
}

TEST_CASE("noisy gate channel") {
  const auto x0 = PauliString::single(1, 0, PauliOp::X);
  const auto z0 = PauliString::single(1, 0, PauliOp::Z);
  const auto rho0 = DensityMatrix::from_state(StateVector::all_zero(1));

  SUBCASE("s = 0 is the unitary channel") {
    auto rng = make_rng(29);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 3);
      const auto a = oracles::random_pauli(n, rng);
      const auto psi = oracles::random_state(n, rng);
      const double theta = uniform_in(rng, -kPi, kPi);
      const auto noisy =
          apply_noisy_gate_channel(DensityMatrix::from_state(psi), a, theta, 0.0);
      const auto pure = DensityMatrix::from_state(apply_gate(psi, a, theta));
      double dist = 0.0;
      for (std::size_t i = 0; i < noisy.data().size(); ++i)
        dist = std::max(dist, std::abs(noisy.data()[i] - pure.data()[i]));
      CHECK(dist < kNumericTolerance);
    }
  }

  SUBCASE("s = 1/2 with A = X fully mixes |0><0|") {
    const auto out = apply_noisy_gate_channel(rho0, x0, 0.0, 0.5);
    CHECK(out.entry(0, 0).real() == Approx(0.5));
    CHECK(out.entry(1, 1).real() == Approx(0.5));
    CHECK(std::abs(out.entry(0, 1)) < 1e-15);
  }

  SUBCASE("A = Z leaves |0><0| invariant for any s") {
    for (double s : {0.1, 0.3, 0.5}) {
      const auto out = apply_noisy_gate_channel(rho0, z0, 0.0, s);
      CHECK(out.entry(0, 0).real() == Approx(1.0));
      CHECK(std::abs(out.entry(1, 1)) < 1e-15);
    }
  }

  SUBCASE("channel output stays a density matrix") {
    auto rng = make_rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 3);
      auto rho = DensityMatrix::from_state(oracles::random_state(n, rng));
      for (int step = 0; step < 5; ++step)
        apply_noisy_gate_channel_inplace(rho, oracles::random_pauli(n, rng),
                                         uniform_in(rng, -kPi, kPi), uniform_in(rng, 0.0, 0.5));
      CHECK(std::abs(rho.trace_real() - 1.0) < kNumericTolerance);
      CHECK(rho.hermiticity_defect() < kNumericTolerance);

      Eigen::MatrixXcd m(rho.dim(), rho.dim());
      for (std::size_t r = 0; r < rho.dim(); ++r)
        for (std::size_t c = 0; c < rho.dim(); ++c)
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rho.entry(r, c);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m);
      CHECK(eig.eigenvalues().minCoeff() > -1e-9);
    }
  }

  SUBCASE("the channel is the exact average over symmetric angle noise") {
    // Average U(theta+d) rho U(theta+d)^dag over d in {-d0, +d0} by hand and
    // compare against the channel at s = sin^2(d0).
    auto rng = make_rng(37);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 3);
      const auto a = oracles::random_pauli(n, rng);
      const auto psi = oracles::random_state(n, rng);
      const double theta = uniform_in(rng, -kPi, kPi);
      const double d0 = uniform_in(rng, 0.0, 0.7);
      const auto plus = DensityMatrix::from_state(apply_gate(psi, a, theta + d0));
      const auto minus = DensityMatrix::from_state(apply_gate(psi, a, theta - d0));
      const auto channel = apply_noisy_gate_channel(DensityMatrix::from_state(psi), a, theta,
                                                    std::sin(d0) * std::sin(d0));
      double dist = 0.0;
      for (std::size_t i = 0; i < channel.data().size(); ++i)
        dist = std::max(dist,
                        std::abs(0.5 * (plus.data()[i] + minus.data()[i]) - channel.data()[i]));
      CHECK(dist < 1e-12);
    }
  }

  SUBCASE("s outside [0, 1/2] throws") {
    CHECK_THROWS_AS(apply_noisy_gate_channel(rho0, x0, 0.0, -0.01), std::invalid_argument);
    CHECK_THROWS_AS(apply_noisy_gate_channel(rho0, x0, 0.0, 0.51), std::invalid_argument);
  }
}

TEST_CASE("channel composition at zero noise reproduces the pure projector") {
  auto rng = make_rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 2);
    auto rc = oracles::random_circuit(n, 12, rng);
    auto rho = DensityMatrix::from_state(rc.circuit.make_initial_state());
    for (const Gate& g : rc.circuit.gates)
      apply_noisy_gate_channel_inplace(rho, g.generator, g.angle(rc.params), 0.0);
    const auto pure = DensityMatrix::from_state(run_circuit(rc.circuit, rc.params));
    double dist = 0.0;
    for (std::size_t i = 0; i < rho.data().size(); ++i)
      dist = std::max(dist, std::abs(rho.data()[i] - pure.data()[i]));
    CHECK(dist < kNumericTolerance);
  }
}

TEST_CASE("ground_overlap") {
  const auto h = build_search(3, 0);
  const auto spec = spectral_data(h);

  SUBCASE("the ground state itself gives 1") {
    CHECK(ground_overlap(spec.ground_basis.front(), spec) == Approx(1.0));
  }
  SUBCASE("orthogonal states give 0") {
    CHECK(ground_overlap(StateVector::basis_state(3, 5), spec) == Approx(0.0));
  }
  SUBCASE("|+>^n overlaps the search ground state with 2^-n") {
    for (int n = 1; n <= 5; ++n) {
      const auto sd = spectral_data(build_search(n, 0));
      CHECK(ground_overlap(StateVector::all_plus(n), sd) ==
            Approx(std::pow(2.0, -n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("density-matrix cap is enforced and configurable") {
  const int old_cap = limits::max_density_qubits();
  limits::set_max_density_qubits(2);
  CHECK_THROWS_AS(DensityMatrix::from_state(StateVector::all_zero(3)), std::invalid_argument);
  limits::set_max_density_qubits(old_cap);
  CHECK_NOTHROW(DensityMatrix::from_state(StateVector::all_zero(3)));
}
