#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "vqn/ansatz.hpp"
#include "vqn/circuit.hpp"
#include "vqn/hamiltonian.hpp"
#include "vqn/spectrum.hpp"

namespace vqn {

/// Correlation structure of the sampled angle perturbations.
///  - PerGate: every gate angle gets its own independent delta.
///  - PerLogicalParameter: one delta per logical parameter, entering each of
///    its gates through the gate coeff (a shift of the parameter itself).
///  - PerLayer: one delta per circuit layer/block, also coeff-propagated;
///    for QAOA maps this coincides with PerLogicalParameter.
enum class NoiseGrouping { PerGate, PerLogicalParameter, PerLayer };

/// Exact second moment <sin^2 delta> for delta ~ uniform(-sigma, sigma):
/// s(sigma) = 1/2 - sin(2 sigma) / (4 sigma), with s(0) = 0 and s <= 1/2 for
/// sigma <= pi/2 (the regime every consumer here operates in).
double sin_sq_moment(double sigma);

/// Uniform(-sigma, sigma) spread per noise group. The uniform family is the
/// only distribution implemented; its exact moment s(sigma) is what the
/// channel and the first-order formula share, so the two are comparable
/// without an order-of-magnitude fudge.
struct NoiseSpec {
  NoiseGrouping grouping = NoiseGrouping::PerGate;
  std::vector<double> sigmas; // one per group, all >= 0

  static NoiseSpec uniform(double sigma, NoiseGrouping grouping, std::size_t group_count);
  void validate() const;
};

/// Resolved gate-to-group mapping for a circuit under a given grouping.
struct NoiseGroups {
  int group_count = 0;
  std::vector<int> group_of_gate;      // one per gate
  std::vector<double> gate_multiplier; // delta -> gate angle offset factor
};

NoiseGroups resolve_groups(const Circuit& circuit, const ParamMap& map, NoiseGrouping grouping);

NoiseGrouping default_noise_grouping(const ParamMap& map);

/// One delta draw per group.
std::vector<double> sample_delta(const NoiseSpec& spec, std::mt19937_64& rng);

struct McEnergy {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Sample average of <psi(theta+delta)|H|psi(theta+delta)> over n_samples
/// draws. Deterministic for a fixed seed: sample i uses the sub-stream
/// derive_seed(seed, i) and the reduction runs in sample order, so results do
/// not depend on the thread count.
McEnergy mc_noisy_energy(const Circuit& circuit, const ParamMap& map,
                         std::span<const double> params, const Hamiltonian& h,
                         const NoiseSpec& spec, long n_samples, std::uint64_t seed,
                         int threads = 1);

/// Tr(rho H) with rho built by composing the averaged per-gate channel with
/// s_k = s(sigma_k). Exact for independent zero-symmetric noise, hence only
/// defined for per-gate grouping, and limited by the density-matrix cap.
double exact_noisy_energy(const Circuit& circuit, const ParamMap& map,
                          std::span<const double> params, const Hamiltonian& h,
                          const NoiseSpec& spec);

/// First-order energy shift
///   dE = sum_k s(sigma_k) (<psi_k|H|psi_k> - E),
/// where |psi_k> is the pure state with gate k's angle shifted by +pi/2.
/// Costs q + 1 pure-state evaluations. Per-gate grouping only.
double first_order_delta_e(const Circuit& circuit, const ParamMap& map,
                           std::span<const double> params, const Hamiltonian& h,
                           const NoiseSpec& spec);

struct SigmaThreshold {
  double sigma = 0.0;
  bool accepted = false;  // E* < E_g + gap held on input
  bool unbounded = false; // E_m == E*, any sigma satisfies the bound
};

/// Largest uniform spread for which the first-order bound keeps the noisy
/// energy below the acceptance threshold:
///   sigma = sqrt[(gap - (E* - E_g)) / (q (E_m - E*))].
SigmaThreshold sigma_threshold(double e_star, const SpectralData& spec, std::size_t gate_count);

struct QuadraticFit {
  double coefficient = 0.0;
  double sigma_lo = 0.0;
  double sigma_hi = 0.0;       // fit window actually used
  double residual = 0.0;       // normalized L2 misfit over the window
  double max_valid_sigma = 0.0; // largest sigma with relative error <= 10%
  bool valid = false;
};

struct PerturbationReport {
  std::vector<double> sigma_grid;
  std::vector<double> mean_de;
  std::vector<double> std_error;
  std::vector<double> exact_de; // NaN where the exact channel is unavailable
  long n_samples = 0;
  std::size_t gate_count = 0;
  int num_qubits = 0;
  QuadraticFit fit; // attached by analysis::fit_quadratic
};

/// Monte-Carlo (and, when within the density-matrix cap and grouping allows,
/// exact-channel) energy shift per sigma in an ascending grid. Shifts are
/// relative to the noiseless energy at the same parameters.
PerturbationReport sigma_sweep(const Circuit& circuit, const ParamMap& map,
                               std::span<const double> params, const Hamiltonian& h,
                               std::span<const double> sigma_grid, long n_samples,
                               std::uint64_t seed,
                               NoiseGrouping grouping = NoiseGrouping::PerGate,
                               int threads = 1);

struct ParamSweepTable {
  std::vector<std::string> labels; // per logical parameter
  std::vector<int> layers;
  std::vector<double> delta_grid;
  std::vector<std::vector<double>> energy; // [param][delta]
  double base_energy = 0.0;
  std::vector<double> sensitivity;    // max |E - base| over the grid, per param
  std::vector<int> ranking;           // param indices, most sensitive first
};

/// Energy with one logical parameter shifted by delta (all gates in its group
/// move together), for every parameter and every delta in the grid.
ParamSweepTable per_parameter_sweep(const Circuit& circuit, const ParamMap& map,
                                    std::span<const double> params_star, const Hamiltonian& h,
                                    std::span<const double> delta_grid, int threads = 1);

} // namespace vqn
