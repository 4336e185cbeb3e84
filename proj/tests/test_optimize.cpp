#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"

#include "vqn/ansatz.hpp"
#include "vqn/hamiltonian.hpp"
#include "vqn/instances.hpp"
#include "vqn/optimize.hpp"
#include "vqn/spectrum.hpp"

using namespace vqn;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

/// Single X-rotation probed with Z: E(theta) = cos(2 theta).
struct SingleGateFixture {
  Circuit circuit;
  ParamMap map;
  Hamiltonian h{1, {{1.0, PauliString::single(1, 0, PauliOp::Z)}}};

  SingleGateFixture() {
    circuit.num_qubits = 1;
    circuit.num_params = 1;
    circuit.gates.push_back({PauliString::single(1, 0, PauliOp::X), 0, 1.0, 0.0});
    map.num_logical = 1;
    map.groups = {{{0, 1.0}}};
    map.labels = {{ParamTag::Theta, 1}};
    map.boxes = {{0.0, 2 * kPi}};
    map.gate_layer = {0};
  }
};

ParamMap trivial_map(const Circuit& circuit) {
  ParamMap map;
  map.num_logical = circuit.num_params;
  map.groups.resize(static_cast<std::size_t>(circuit.num_params));
  for (std::size_t k = 0; k < circuit.gates.size(); ++k)
    map.groups[static_cast<std::size_t>(circuit.gates[k].param_id)].push_back(
        {static_cast<int>(k), circuit.gates[k].coeff});
  map.labels.assign(static_cast<std::size_t>(circuit.num_params), {ParamTag::Theta, 1});
  map.boxes.assign(static_cast<std::size_t>(circuit.num_params), {0.0, 2 * kPi});
  map.gate_layer.assign(circuit.gates.size(), 0);
  return map;
}

} // namespace

TEST_CASE("energy_gradient on the single-gate system") {
  SingleGateFixture fx;

  SUBCASE("theta = pi/8 gives -sqrt(2)") {
    const std::vector<double> params{kPi / 8};
    const auto grad = energy_gradient(fx.circuit, fx.map, params, fx.h);
    CHECK(grad[0] == Approx(-std::sqrt(2.0)).epsilon(1e-12));
  }

  SUBCASE("theta = 0 is an extremum") {
    const std::vector<double> params{0.0};
    CHECK(energy_gradient(fx.circuit, fx.map, params, fx.h)[0] == Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("parameter-shift gradients match finite differences") {
  auto rng = make_rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    auto rc = oracles::random_circuit(n, 4 + static_cast<int>(rng() % 17), rng);
    const auto map = trivial_map(rc.circuit);
    const auto h = oracles::random_hamiltonian(n, 4, rng);
    const auto grad = energy_gradient(rc.circuit, map, rc.params, h);
    const auto fd = oracles::finite_difference_gradient(
        [&](const std::vector<double>& x) { return energy_value(rc.circuit, x, h); },
        rc.params);
    double worst = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i)
      worst = std::max(worst, std::abs(grad[i] - fd[i]));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("adjoint gradients equal the shift rule to machine precision") {
  auto rng = make_rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    auto rc = oracles::random_circuit(n, 4 + static_cast<int>(rng() % 13), rng);
    const auto map = trivial_map(rc.circuit);
    const auto h = oracles::random_hamiltonian(n, 3, rng);
    const auto shift = energy_gradient(rc.circuit, map, rc.params, h);
    const auto adjoint = energy_gradient_adjoint(rc.circuit, map, rc.params, h);
    double worst = 0.0;
    for (std::size_t i = 0; i < shift.size(); ++i)
      worst = std::max(worst, std::abs(shift[i] - adjoint[i]));
    CHECK(worst < 1e-10);
  }

  SUBCASE("including shared parameters and coeffs") {
    const auto ansatz = qaoa_build(build_search(3, 2), 2, QaoaMode::Decomposed);
    const std::vector<double> params{0.7, 0.3, 1.9, 1.1};
    const auto h = build_search(3, 2);
    const auto shift = energy_gradient(ansatz.circuit, ansatz.map, params, h);
    const auto adjoint = energy_gradient_adjoint(ansatz.circuit, ansatz.map, params, h);
    for (std::size_t i = 0; i < shift.size(); ++i)
      CHECK(shift[i] == Approx(adjoint[i]).epsilon(1e-12));
  }
}

TEST_CASE("minimize") {
  SUBCASE("single gate reaches E* = -1 at theta = pi/2 (mod pi)") {
    SingleGateFixture fx;
    const auto result = minimize(fx.circuit, fx.map, fx.h, 4, 7);
    CHECK(result.converged);
    CHECK(result.energy_star == Approx(-1.0).epsilon(1e-10));
    const double folded = wrap_angle(result.params_star[0], kPi);
    CHECK(folded == Approx(kPi / 2).epsilon(1e-6));
  }

  SUBCASE("QAOA p=1 reaches the search n=1 ground state exactly") {
    const auto h = build_search(1, 0);
    const auto ansatz = qaoa_build(h, 1, QaoaMode::Decomposed);
    // Grid oracle: a coarse scan over the (gamma, beta) box certifies that a
    // zero-energy point exists for this landscape.
    double grid_best = 1e9;
    for (int i = 0; i < 64; ++i)
      for (int j = 0; j < 64; ++j) {
        const std::vector<double> p{2 * kPi * i / 64.0, kPi * j / 64.0};
        grid_best = std::min(grid_best, energy_value(ansatz.circuit, p, h));
      }
    CHECK(grid_best < 1e-2);
    const auto result = minimize(ansatz.circuit, ansatz.map, h, 8, 11);
    CHECK(result.energy_star == Approx(0.0).epsilon(1e-8));
    CHECK(result.energy_star <= grid_best + 1e-9);
    CHECK(result.t_exec.has_value());
  }

  SUBCASE("energy never drops below the ground energy") {
    const auto g = gen_maxcut(4, 0.6, 5);
    const auto h = build_maxcut(g);
    const auto spec = spectral_data(h);
    const auto ansatz = qaoa_build(h, 2, QaoaMode::Decomposed);
    const auto result = minimize(ansatz.circuit, ansatz.map, h, 6, 3);
    CHECK(result.energy_star >= spec.ground_energy - 1e-9);
    CHECK(result.energy_star ==
          Approx(energy_value(ansatz.circuit, result.params_star, h)).epsilon(1e-8));
  }

  SUBCASE("identical seeds produce bit-identical parameters across thread counts") {
    const auto h = build_search(3, 4);
    const auto ansatz = qaoa_build(h, 2, QaoaMode::Decomposed);
    MinimizeOptions serial;
    serial.threads = 1;
    MinimizeOptions parallel = serial;
    parallel.threads = 4;
    const auto a = minimize(ansatz.circuit, ansatz.map, h, 5, 123, serial);
    const auto b = minimize(ansatz.circuit, ansatz.map, h, 5, 123, parallel);
    CHECK(a.energy_star == b.energy_star);
    CHECK(a.params_star == b.params_star);
  }

  SUBCASE("iteration starvation reports converged = false without throwing") {
    SingleGateFixture fx;
    MinimizeOptions options;
    options.max_iterations = 1;
    options.grad_tolerance = 1e-14;
    const auto result = minimize(fx.circuit, fx.map, fx.h, 2, 1, options);
    CHECK_FALSE(result.converged);
  }

  SUBCASE("restarts < 1 throws") {
    SingleGateFixture fx;
    CHECK_THROWS_AS(minimize(fx.circuit, fx.map, fx.h, 0, 1), std::invalid_argument);
  }
}

TEST_CASE("minimize_constrained") {
  const auto h = build_search(2, 0);
  const auto ansatz = qaoa_build(h, 1, QaoaMode::Decomposed);

  SUBCASE("t_max = 0 forces all angles to zero") {
    const auto result = minimize_constrained(ansatz.circuit, ansatz.map, h, 0.0, 3, 17);
    for (double v : result.params_star) CHECK(v == Approx(0.0));
    CHECK(result.energy_star ==
          Approx(expectation(StateVector::all_plus(2), h)).epsilon(1e-12));
    CHECK(*result.t_exec == Approx(0.0));
  }

  SUBCASE("an inactive budget matches unconstrained optimization") {
    const auto unconstrained = minimize(ansatz.circuit, ansatz.map, h, 12, 29);
    const double t_max = 3 * kPi * 1 + 1.0; // beyond the box-range maximum
    const auto constrained = minimize_constrained(ansatz.circuit, ansatz.map, h, t_max, 12, 29,
                                                  {unconstrained.params_star});
    CHECK(constrained.energy_star == Approx(unconstrained.energy_star).epsilon(1e-6));
  }

  SUBCASE("the constraint is satisfied exactly after projection") {
    for (double t_max : {0.5, 1.0, 2.5, 4.0}) {
      const auto result = minimize_constrained(ansatz.circuit, ansatz.map, h, t_max, 4, 31);
      CHECK(*result.t_exec <= t_max + 1e-9);
      CHECK(execution_time(ansatz.map, result.params_star) <= t_max + 1e-9);
    }
  }

  SUBCASE("warm-started budgets are monotone") {
    std::vector<double> budgets{0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.5, 6.0};
    std::vector<double> energies;
    std::vector<std::vector<double>> warm;
    for (double t : budgets) {
      const auto r = minimize_constrained(ansatz.circuit, ansatz.map, h, t, 3, 37, warm);
      if (!energies.empty()) CHECK(r.energy_star <= energies.back() + 1e-9);
      energies.push_back(r.energy_star);
      warm.push_back(r.params_star);
    }
    CHECK(energies.front() > energies.back()); // budget must buy something here
  }

  SUBCASE("negative budgets are rejected") {
    CHECK_THROWS_AS(minimize_constrained(ansatz.circuit, ansatz.map, h, -0.1, 2, 1),
                    std::invalid_argument);
  }

  SUBCASE("non-QAOA maps are rejected") {
    const auto cb = checkerboard(2, 1);
    const auto hz = build_ising(2, 0.3);
    CHECK_THROWS_AS(minimize_constrained(cb.circuit, cb.map, hz, 1.0, 2, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("depth_time_scan") {
  const auto h = build_search(2, 1);
  ScanOptions options;
  options.restarts = 3;
  options.seed = 41;
  const std::vector<int> depths{1, 2};
  const std::vector<double> budgets{0.0, 0.6, 1.2, 1.8, 2.4, 3.0, 3.6};
  const auto table = depth_time_scan(h, depths, budgets, options);

  SUBCASE("the t_max = 0 column is the uniform-superposition energy") {
    const double e_plus = expectation(StateVector::all_plus(2), h);
    for (std::size_t di = 0; di < depths.size(); ++di)
      CHECK(table.cell(di, 0).e_star == Approx(e_plus).epsilon(1e-12));
  }

  SUBCASE("energies are non-increasing along both axes") {
    for (std::size_t di = 0; di < depths.size(); ++di)
      for (std::size_t bi = 1; bi < budgets.size(); ++bi)
        CHECK(table.cell(di, bi).e_star <= table.cell(di, bi - 1).e_star + 1e-9);
    for (std::size_t di = 1; di < depths.size(); ++di)
      for (std::size_t bi = 0; bi < budgets.size(); ++bi)
        CHECK(table.cell(di, bi).e_star <= table.cell(di - 1, bi).e_star + 1e-9);
  }

  SUBCASE("every cell respects its budget and reports an overlap") {
    for (const auto& cell : table.cells) {
      CHECK(cell.t_exec <= cell.t_max + 1e-9);
      CHECK(cell.overlap >= 0.0);
      CHECK(cell.overlap <= 1.0 + 1e-12);
    }
  }

  SUBCASE("empty grids are rejected") {
    CHECK_THROWS_AS(depth_time_scan(h, depths, {}, options), std::invalid_argument);
  }
}
