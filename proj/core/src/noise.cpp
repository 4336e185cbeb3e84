#include "vqn/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "vqn/constants.hpp"
#include "vqn/parallel.hpp"
#include "vqn/rng.hpp"

namespace vqn {

double sin_sq_moment(double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("sin_sq_moment: sigma must be >= 0");
  if (sigma < 1e-4) {
    // Series of 1/2 - sin(2s)/(4s); avoids cancellation at small spreads.
    const double s2 = sigma * sigma;
    return s2 / 3.0 - s2 * s2 / 15.0 + 2.0 * s2 * s2 * s2 / 315.0;
  }
  return 0.5 - std::sin(2.0 * sigma) / (4.0 * sigma);
}

NoiseSpec NoiseSpec::uniform(double sigma, NoiseGrouping grouping, std::size_t group_count) {
  NoiseSpec spec;
  spec.grouping = grouping;
  spec.sigmas.assign(group_count, sigma);
  spec.validate();
  return spec;
}

void NoiseSpec::validate() const {
  for (double s : sigmas)
    if (!(s >= 0.0)) throw std::invalid_argument("NoiseSpec: sigmas must be >= 0");
}

NoiseGroups resolve_groups(const Circuit& circuit, const ParamMap& map, NoiseGrouping grouping) {
  NoiseGroups groups;
  const std::size_t q = circuit.gates.size();
  groups.group_of_gate.resize(q);
  groups.gate_multiplier.resize(q);
  switch (grouping) {
    case NoiseGrouping::PerGate:
      // Independent perturbation of every raw gate angle.
      groups.group_count = static_cast<int>(q);
      for (std::size_t k = 0; k < q; ++k) {
        groups.group_of_gate[k] = static_cast<int>(k);
        groups.gate_multiplier[k] = 1.0;
      }
      break;
    case NoiseGrouping::PerLogicalParameter:
      // One delta per logical parameter, entering each gate through its coeff
      // (i.e. the shared parameter itself is perturbed).
      groups.group_count = map.num_logical;
      for (std::size_t k = 0; k < q; ++k) {
        groups.group_of_gate[k] = circuit.gates[k].param_id;
        groups.gate_multiplier[k] = circuit.gates[k].coeff;
      }
      break;
    case NoiseGrouping::PerLayer: {
      if (map.gate_layer.size() != q)
        throw std::invalid_argument("resolve_groups: parameter map lacks layer ids");
      const int max_layer =
          q == 0 ? -1 : *std::max_element(map.gate_layer.begin(), map.gate_layer.end());
      groups.group_count = max_layer + 1;
      for (std::size_t k = 0; k < q; ++k) {
        groups.group_of_gate[k] = map.gate_layer[k];
        groups.gate_multiplier[k] = circuit.gates[k].coeff;
      }
      break;
    }
  }
  return groups;
}

NoiseGrouping default_noise_grouping(const ParamMap& map) {
  return map.qaoa_mode == QaoaMode::Layerwise ? NoiseGrouping::PerLayer : NoiseGrouping::PerGate;
}

std::vector<double> sample_delta(const NoiseSpec& spec, std::mt19937_64& rng) {
  std::vector<double> delta(spec.sigmas.size());
  for (std::size_t g = 0; g < delta.size(); ++g)
    delta[g] = spec.sigmas[g] > 0.0 ? uniform_symmetric(rng, spec.sigmas[g]) : 0.0;
  return delta;
}

namespace {

void check_spec_matches(const NoiseSpec& spec, const NoiseGroups& groups) {
  if (spec.sigmas.size() != static_cast<std::size_t>(groups.group_count))
    throw std::invalid_argument("NoiseSpec: sigma count does not match the noise groups");
}

} // namespace

McEnergy mc_noisy_energy(const Circuit& circuit, const ParamMap& map,
                         std::span<const double> params, const Hamiltonian& h,
                         const NoiseSpec& spec, long n_samples, std::uint64_t seed,
                         int threads) {
  if (n_samples < 2) throw std::invalid_argument("mc_noisy_energy: n_samples must be >= 2");
  spec.validate();
  const NoiseGroups groups = resolve_groups(circuit, map, spec.grouping);
  check_spec_matches(spec, groups);

  std::vector<double> energies(static_cast<std::size_t>(n_samples));
  parallel_for(static_cast<std::size_t>(n_samples), threads, [&](std::size_t i) {
    auto rng = make_rng(derive_seed(seed, i));
    const std::vector<double> delta = sample_delta(spec, rng);
    std::vector<double> offsets(circuit.gates.size());
    for (std::size_t k = 0; k < offsets.size(); ++k)
      offsets[k] = groups.gate_multiplier[k] *
                   delta[static_cast<std::size_t>(groups.group_of_gate[k])];
    energies[i] = expectation(run_circuit_with_offsets(circuit, params, offsets), h);
  });

  // Fixed-order reduction keeps the result independent of the thread count.
  double mean = 0.0;
  for (double e : energies) mean += e;
  mean /= static_cast<double>(n_samples);
  double var = 0.0;
  for (double e : energies) var += (e - mean) * (e - mean);
  var /= static_cast<double>(n_samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(n_samples))};
}

double exact_noisy_energy(const Circuit& circuit, const ParamMap& map,
                          std::span<const double> params, const Hamiltonian& h,
                          const NoiseSpec& spec) {
  spec.validate();
  if (spec.grouping != NoiseGrouping::PerGate)
    throw std::invalid_argument(
        "exact_noisy_energy: correlated groupings have no exact channel; use Monte Carlo");
  if (circuit.num_qubits > limits::max_density_qubits())
    throw std::invalid_argument("exact_noisy_energy: qubit count exceeds the density-matrix cap");
  if (spec.sigmas.size() != circuit.gates.size())
    throw std::invalid_argument("NoiseSpec: sigma count does not match the noise groups");
  if (params.size() != static_cast<std::size_t>(circuit.num_params))
    throw std::invalid_argument("exact_noisy_energy: parameter vector length mismatch");

  DensityMatrix rho = DensityMatrix::from_state(circuit.make_initial_state());
  for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
    const Gate& g = circuit.gates[k];
    apply_noisy_gate_channel_inplace(rho, g.generator, g.angle(params),
                                     sin_sq_moment(spec.sigmas[k]));
  }
  (void)map;
  return expectation(rho, h);
}

double first_order_delta_e(const Circuit& circuit, const ParamMap& map,
                           std::span<const double> params, const Hamiltonian& h,
                           const NoiseSpec& spec) {
  spec.validate();
  if (spec.grouping != NoiseGrouping::PerGate)
    throw std::invalid_argument("first_order_delta_e: per-gate grouping required");
  if (spec.sigmas.size() != circuit.gates.size())
    throw std::invalid_argument("NoiseSpec: sigma count does not match the noise groups");
  (void)map;

  const double base = expectation(run_circuit(circuit, params), h);
  double delta_e = 0.0;
  std::vector<double> offsets(circuit.gates.size(), 0.0);
  for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
    const double a_k = sin_sq_moment(spec.sigmas[k]);
    if (a_k == 0.0) continue;
    offsets[k] = std::numbers::pi / 2.0;
    const double e_k = expectation(run_circuit_with_offsets(circuit, params, offsets), h);
    offsets[k] = 0.0;
    delta_e += a_k * (e_k - base);
  }
  return delta_e;
}

SigmaThreshold sigma_threshold(double e_star, const SpectralData& spec, std::size_t gate_count) {
  SigmaThreshold out;
  const double excess = e_star - spec.ground_energy;
  if (excess >= spec.gap) return out; // not accepted: no tolerable spread
  out.accepted = true;
  const double margin = spec.max_energy - e_star;
  if (margin <= kNumericTolerance) {
    out.unbounded = true;
    out.sigma = std::numeric_limits<double>::infinity();
    return out;
  }
  out.sigma = std::sqrt((spec.gap - excess) / (static_cast<double>(gate_count) * margin));
  return out;
}

PerturbationReport sigma_sweep(const Circuit& circuit, const ParamMap& map,
                               std::span<const double> params, const Hamiltonian& h,
                               std::span<const double> sigma_grid, long n_samples,
                               std::uint64_t seed, NoiseGrouping grouping, int threads) {
  if (!std::is_sorted(sigma_grid.begin(), sigma_grid.end()))
    throw std::invalid_argument("sigma_sweep: sigma grid must be ascending");
  const NoiseGroups groups = resolve_groups(circuit, map, grouping);

  PerturbationReport report;
  report.sigma_grid.assign(sigma_grid.begin(), sigma_grid.end());
  report.n_samples = n_samples;
  report.gate_count = circuit.gate_count();
  report.num_qubits = circuit.num_qubits;

  const double base = expectation(run_circuit(circuit, params), h);
  const bool exact_available = grouping == NoiseGrouping::PerGate &&
                               circuit.num_qubits <= limits::max_density_qubits();

  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    const NoiseSpec spec = NoiseSpec::uniform(sigma_grid[i], grouping,
                                              static_cast<std::size_t>(groups.group_count));
    if (sigma_grid[i] == 0.0) {
      report.mean_de.push_back(0.0);
      report.std_error.push_back(0.0);
      report.exact_de.push_back(exact_available ? 0.0
                                                : std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const McEnergy mc =
        mc_noisy_energy(circuit, map, params, h, spec, n_samples, derive_seed(seed, i), threads);
    report.mean_de.push_back(mc.mean - base);
    report.std_error.push_back(mc.std_error);
    report.exact_de.push_back(exact_available
                                  ? exact_noisy_energy(circuit, map, params, h, spec) - base
                                  : std::numeric_limits<double>::quiet_NaN());
  }
  return report;
}

ParamSweepTable per_parameter_sweep(const Circuit& circuit, const ParamMap& map,
                                    std::span<const double> params_star, const Hamiltonian& h,
                                    std::span<const double> delta_grid, int threads) {
  map.validate(circuit);
  if (params_star.size() != static_cast<std::size_t>(circuit.num_params))
    throw std::invalid_argument("per_parameter_sweep: parameter vector length mismatch");

  ParamSweepTable table;
  table.delta_grid.assign(delta_grid.begin(), delta_grid.end());
  table.base_energy = expectation(run_circuit(circuit, params_star), h);
  const std::size_t num_params = static_cast<std::size_t>(map.num_logical);
  table.labels.resize(num_params);
  table.layers.resize(num_params);
  table.energy.assign(num_params, std::vector<double>(delta_grid.size(), 0.0));
  table.sensitivity.assign(num_params, 0.0);

  parallel_for(num_params, threads, [&](std::size_t k) {
    table.labels[k] = map.label_string(static_cast<int>(k));
    table.layers[k] = map.labels[k].layer;
    std::vector<double> shifted(params_star.begin(), params_star.end());
    for (std::size_t d = 0; d < delta_grid.size(); ++d) {
      shifted[k] = params_star[k] + delta_grid[d];
      const double e = expectation(run_circuit(circuit, shifted), h);
      table.energy[k][d] = e;
      table.sensitivity[k] = std::max(table.sensitivity[k], std::abs(e - table.base_energy));
    }
  });

  table.ranking.resize(num_params);
  for (std::size_t k = 0; k < num_params; ++k) table.ranking[k] = static_cast<int>(k);
  std::stable_sort(table.ranking.begin(), table.ranking.end(), [&](int a, int b) {
    return table.sensitivity[static_cast<std::size_t>(a)] >
           table.sensitivity[static_cast<std::size_t>(b)];
  });
  return table;
}

} // namespace vqn
