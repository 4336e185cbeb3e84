#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"

#include "vqn/analysis.hpp"
#include "vqn/ansatz.hpp"
#include "vqn/hamiltonian.hpp"
#include "vqn/noise.hpp"
#include "vqn/optimize.hpp"
#include "vqn/spectrum.hpp"

using namespace vqn;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

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

struct SingleGate {
  Circuit circuit;
  ParamMap map;
  Hamiltonian h{1, {{1.0, PauliString::single(1, 0, PauliOp::Z)}}};

  SingleGate() {
    circuit.num_qubits = 1;
    circuit.num_params = 1;
    circuit.gates.push_back({PauliString::single(1, 0, PauliOp::X), 0, 1.0, 0.0});
    map = trivial_map(circuit);
  }
};

/// A converged 2-qubit checkerboard optimum for the trickier Appendix-style
/// checks; tight gradient tolerance so stationarity gates pass.
struct ConvergedCheckerboard {
  AnsatzCircuit ansatz = checkerboard(2, 1);
  Hamiltonian h = build_ising(2, 1.0);
  OptResult opt;

  ConvergedCheckerboard() {
    MinimizeOptions options;
    options.grad_tolerance = 1e-8;
    options.max_iterations = 5000;
    opt = minimize(ansatz.circuit, ansatz.map, h, 6, 2024, options);
  }
};

} // namespace

TEST_CASE("stability_bounds") {
  SpectralData sd;
  sd.ground_energy = -2.0;
  sd.gap = 1.0;
  sd.max_energy = 3.0;

  SUBCASE("ground energy gives (1, 1, accepted)") {
    const auto b = stability_bounds(-2.0, sd);
    CHECK(b.lower == Approx(1.0));
    CHECK(b.upper == Approx(1.0));
    CHECK(b.accepted);
  }

  SUBCASE("the acceptance boundary zeroes the lower bound") {
    const auto b = stability_bounds(-1.0, sd);
    CHECK(b.lower == Approx(0.0));
    CHECK_FALSE(b.accepted);
  }

  SUBCASE("acceptance is equivalent to a positive lower bound") {
    for (double e : {-2.0, -1.5, -1.0001, -1.0, -0.5, 2.0}) {
      const auto b = stability_bounds(e, sd);
      CHECK(b.accepted == (b.lower > 0.0));
    }
  }

  SUBCASE("bounds may be vacuous but clamped variants stay in [0, 1]") {
    const auto b = stability_bounds(2.5, sd);
    CHECK(b.lower < 0.0);
    CHECK(b.clamped_lower() == 0.0);
    CHECK(b.clamped_upper() == Approx(0.1));
  }

  SUBCASE("flat spectra are rejected") {
    SpectralData flat;
    flat.ground_energy = 1.0;
    flat.gap = 0.0;
    flat.max_energy = 1.0;
    CHECK_THROWS_AS(stability_bounds(1.0, flat), std::invalid_argument);
  }
}

TEST_CASE("exact overlaps always sit inside the stability bounds") {
  auto rng = make_rng(51);
  int trials = 0;
  while (trials < 1000) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const auto h = oracles::random_hamiltonian(n, 2 + static_cast<int>(rng() % 4), rng);
    const auto spec = spectral_data(h);
    if (spec.max_energy - spec.ground_energy < 1e-6) continue; // flat spectrum, no bound
    const auto psi = oracles::random_state(n, rng);
    const auto bounds = stability_bounds(expectation(psi, h), spec);
    const double overlap = ground_overlap(psi, spec);
    CHECK(overlap >= bounds.clamped_lower() - 1e-9);
    CHECK(overlap <= std::min(bounds.upper, 1.0) + 1e-9);
    ++trials;
  }
}

TEST_CASE("fit_quadratic") {
  SUBCASE("an exact quadratic is recovered with zero residual") {
    PerturbationReport report;
    report.gate_count = 10;
    for (double sigma : {0.01, 0.02, 0.05, 0.1, 0.2}) {
      report.sigma_grid.push_back(sigma);
      report.mean_de.push_back(3.0 * sigma * sigma);
      report.std_error.push_back(0.0);
      report.exact_de.push_back(3.0 * sigma * sigma);
    }
    const auto fit = fit_quadratic(report);
    CHECK(fit.coefficient == Approx(3.0).epsilon(1e-12));
    CHECK(fit.residual == Approx(0.0).epsilon(1e-10));
    CHECK(fit.max_valid_sigma == Approx(0.2));
  }

  SUBCASE("single-gate analytic data fits c = 2/3 within 2%") {
    PerturbationReport report;
    report.gate_count = 1;
    for (double sigma : {0.05, 0.1, 0.15, 0.2, 0.25}) {
      report.sigma_grid.push_back(sigma);
      report.mean_de.push_back(1.0 - std::sin(2 * sigma) / (2 * sigma));
      report.std_error.push_back(0.0);
    }
    const auto fit = fit_quadratic(report);
    CHECK(fit.coefficient == Approx(2.0 / 3.0).epsilon(0.02));
  }

  SUBCASE("the validity cut restricts the window") {
    PerturbationReport report;
    report.gate_count = 100;
    for (double sigma : {0.01, 0.02, 0.05, 0.08, 0.3, 0.6}) {
      report.sigma_grid.push_back(sigma);
      report.mean_de.push_back(sigma * sigma);
      report.std_error.push_back(0.0);
    }
    const auto fit = fit_quadratic(report, 1.0); // q sigma^2 <= 1 excludes 0.3 and 0.6
    CHECK(fit.sigma_hi == Approx(0.08));
  }

  SUBCASE("fewer than 3 usable points throws") {
    PerturbationReport report;
    report.gate_count = 1;
    report.sigma_grid = {0.0, 0.1};
    report.mean_de = {0.0, 0.01};
    report.std_error = {0.0, 0.001};
    CHECK_THROWS_AS(fit_quadratic(report), std::invalid_argument);
  }
}

TEST_CASE("fitted coefficient respects the q(E_m - E*)/3 bound on optimized circuits") {
  const auto h = build_search(3, 5);
  const auto spec = spectral_data(h);
  const auto ansatz = qaoa_build(h, 2, QaoaMode::Decomposed);
  const auto opt = minimize(ansatz.circuit, ansatz.map, h, 8, 77);
  const std::vector<double> grid{0.01, 0.02, 0.03, 0.04, 0.05, 0.06};
  auto report = sigma_sweep(ansatz.circuit, ansatz.map, opt.params_star, h, grid, 2000, 99);
  report.fit = fit_quadratic(report);
  const double bound = static_cast<double>(ansatz.circuit.gate_count()) *
                       (spec.max_energy - opt.energy_star) / 3.0;
  CHECK(report.fit.coefficient <= bound);
  CHECK(report.fit.coefficient > 0.0);
}

TEST_CASE("noisy_gradients") {
  SUBCASE("single gate: B^1 = 2 sin(2 theta)") {
    SingleGate fx;
    for (double theta : {0.2, 0.9, 2.1}) {
      const std::vector<double> params{theta};
      const auto b = noisy_gradients(fx.circuit, fx.map, params, fx.h);
      REQUIRE(b.rows() == 1);
      REQUIRE(b.cols() == 1);
      CHECK(b(0, 0) == Approx(2 * std::sin(2 * theta)).epsilon(1e-10));
    }
  }

  SUBCASE("a point where every shifted energy is stationary gives a zero matrix") {
    SingleGate fx;
    const std::vector<double> params{0.0}; // E_1(theta) = -cos(2 theta), stationary at 0
    const auto b = noisy_gradients(fx.circuit, fx.map, params, fx.h);
    CHECK(std::abs(b(0, 0)) < 1e-12);
  }

  SUBCASE("matches finite differences of the shifted-gate energies") {
    auto rng = make_rng(53);
    for (int trial = 0; trial < 10; ++trial) {
      auto rc = oracles::random_circuit(3, 6, rng);
      const auto map = trivial_map(rc.circuit);
      const auto h = oracles::random_hamiltonian(3, 3, rng);
      const auto b = noisy_gradients(rc.circuit, map, rc.params, h);
      for (std::size_t k = 0; k < rc.circuit.gates.size(); ++k) {
        const auto fd = oracles::finite_difference_gradient(
            [&](const std::vector<double>& x) {
              std::vector<double> offsets(rc.circuit.gate_count(), 0.0);
              offsets[k] = kPi / 2;
              return expectation(run_circuit_with_offsets(rc.circuit, x, offsets), h);
            },
            rc.params);
        for (std::size_t j = 0; j < fd.size(); ++j)
          CHECK(b(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) ==
                Approx(fd[j]).epsilon(1e-6).scale(1.0));
      }
    }
  }
}

TEST_CASE("hessian") {
  SUBCASE("single gate at the minimum: d2E/dtheta2 = 4") {
    SingleGate fx;
    const std::vector<double> params{kPi / 2};
    const auto hess = hessian(fx.circuit, fx.map, params, fx.h);
    CHECK(hess(0, 0) == Approx(4.0).epsilon(1e-10));
  }

  SUBCASE("symmetric and equal to finite differences on random circuits") {
    auto rng = make_rng(59);
    for (int trial = 0; trial < 5; ++trial) {
      auto rc = oracles::random_circuit(3, 6, rng);
      const auto map = trivial_map(rc.circuit);
      const auto h = oracles::random_hamiltonian(3, 3, rng);
      const auto hess = hessian(rc.circuit, map, rc.params, h);
      CHECK((hess - hess.transpose()).cwiseAbs().maxCoeff() < 1e-9);
      const auto fd = oracles::finite_difference_hessian(
          [&](const std::vector<double>& x) { return energy_value(rc.circuit, x, h); },
          rc.params);
      CHECK((hess - fd).cwiseAbs().maxCoeff() < 1e-6);
    }
  }

  SUBCASE("positive semidefinite at converged optima") {
    ConvergedCheckerboard fx;
    REQUIRE(fx.opt.converged);
    const auto hess = hessian(fx.ansatz.circuit, fx.ansatz.map, fx.opt.params_star, fx.h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
    CHECK(eig.eigenvalues().minCoeff() > -1e-6);
  }

  SUBCASE("shared-parameter circuits match finite differences too") {
    const auto h = build_search(2, 3);
    const auto ansatz = qaoa_build(h, 1, QaoaMode::Decomposed);
    const std::vector<double> params{0.8, 0.4};
    const auto hess = hessian(ansatz.circuit, ansatz.map, params, h);
    const auto fd = oracles::finite_difference_hessian(
        [&](const std::vector<double>& x) { return energy_value(ansatz.circuit, x, h); },
        params);
    CHECK((hess - fd).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("optimum_shift") {
  ConvergedCheckerboard fx;
  REQUIRE(fx.opt.converged);
  const std::size_t q = fx.ansatz.circuit.gate_count();

  SUBCASE("zero noise shifts nothing") {
    const auto spec = NoiseSpec::uniform(0.0, NoiseGrouping::PerGate, q);
    const auto shift =
        optimum_shift(fx.ansatz.circuit, fx.ansatz.map, fx.opt.params_star, fx.h, spec);
    for (double v : shift.delta_theta_star) CHECK(v == Approx(0.0));
    CHECK(shift.predicted_gain == Approx(0.0));
  }

  SUBCASE("the shift scales linearly with the moment s(sigma)") {
    std::vector<double> log_s, log_norm;
    for (double sigma : {0.02, 0.04, 0.06, 0.08, 0.1}) {
      const auto spec = NoiseSpec::uniform(sigma, NoiseGrouping::PerGate, q);
      const auto shift =
          optimum_shift(fx.ansatz.circuit, fx.ansatz.map, fx.opt.params_star, fx.h, spec);
      double norm = 0.0;
      for (double v : shift.delta_theta_star) norm += v * v;
      norm = std::sqrt(norm);
      REQUIRE(norm > 0.0);
      log_s.push_back(std::log(sin_sq_moment(sigma)));
      log_norm.push_back(std::log(norm));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < log_s.size(); ++i) mx += log_s[i], my += log_norm[i];
    mx /= log_s.size();
    my /= log_norm.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < log_s.size(); ++i) {
      sxx += (log_s[i] - mx) * (log_s[i] - mx);
      sxy += (log_s[i] - mx) * (log_norm[i] - my);
    }
    CHECK(sxy / sxx == Approx(1.0).epsilon(0.1));
  }

  SUBCASE("the quadratic model never predicts a worse energy") {
    for (double sigma : {0.02, 0.05, 0.1}) {
      const auto spec = NoiseSpec::uniform(sigma, NoiseGrouping::PerGate, q);
      const auto shift =
          optimum_shift(fx.ansatz.circuit, fx.ansatz.map, fx.opt.params_star, fx.h, spec);
      CHECK(shift.predicted_gain <= 0.0);
      CHECK(shift.hessian_rank > 0);
      CHECK(shift.hessian_rank <= static_cast<int>(q));
    }
  }

  SUBCASE("applying the shift does not hurt the exact channel energy") {
    for (double sigma : {0.02, 0.05}) {
      const auto spec = NoiseSpec::uniform(sigma, NoiseGrouping::PerGate, q);
      const auto shift =
          optimum_shift(fx.ansatz.circuit, fx.ansatz.map, fx.opt.params_star, fx.h, spec);
      std::vector<double> shifted = fx.opt.params_star;
      for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += shift.delta_theta_star[i];
      const double before =
          exact_noisy_energy(fx.ansatz.circuit, fx.ansatz.map, fx.opt.params_star, fx.h, spec);
      const double after =
          exact_noisy_energy(fx.ansatz.circuit, fx.ansatz.map, shifted, fx.h, spec);
      CHECK(after <= before + 1e-9);
    }
  }

  SUBCASE("non-stationary points are rejected") {
    std::vector<double> off = fx.opt.params_star;
    off[0] += 0.3;
    const auto spec = NoiseSpec::uniform(0.05, NoiseGrouping::PerGate, q);
    CHECK_THROWS_AS(optimum_shift(fx.ansatz.circuit, fx.ansatz.map, off, fx.h, spec),
                    std::invalid_argument);
  }
}

TEST_CASE("analysis_summary_json carries the headline numbers") {
  SpectralData sd;
  sd.ground_energy = -1.0;
  sd.gap = 0.5;
  sd.max_energy = 2.0;
  const auto bounds = stability_bounds(-0.9, sd);
  const auto threshold = sigma_threshold(-0.9, sd, 20);
  QuadraticFit fit;
  fit.coefficient = 1.25;
  fit.max_valid_sigma = 0.2;
  const std::string json = analysis_summary_json(-0.9, sd, bounds, threshold, fit);
  CHECK(json.find("\"E_star\": -0.9") != std::string::npos);
  CHECK(json.find("\"delta\": 0.5") != std::string::npos);
  CHECK(json.find("\"accepted\": true") != std::string::npos);
  CHECK(json.find("\"fit_c\": 1.25") != std::string::npos);
}
