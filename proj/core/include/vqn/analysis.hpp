#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vqn/ansatz.hpp"
#include "vqn/circuit.hpp"
#include "vqn/hamiltonian.hpp"
#include "vqn/noise.hpp"
#include "vqn/spectrum.hpp"

namespace vqn {

/// Two-sided overlap bound from the energy:
///   1 - (E - E_g)/gap  <=  |<psi|g>|^2  <=  1 - (E - E_g)/(E_m - E_g).
/// Bounds are reported unclamped (the lower bound may be negative, i.e.
/// vacuous); clamped accessors truncate to [0, 1].
struct StabilityBounds {
  double lower = 0.0;
  double upper = 1.0;
  bool accepted = false; // E < E_g + gap

  double clamped_lower() const;
  double clamped_upper() const;
};

StabilityBounds stability_bounds(double energy, const SpectralData& spec);

/// Weighted least-squares fit dE = c sigma^2 over grid points with
/// q sigma^2 <= validity_cut (and sigma > 0). Requires >= 3 such points.
/// max_valid_sigma is the largest grid sigma reached before the fit's
/// relative error first exceeds 10%.
QuadraticFit fit_quadratic(const PerturbationReport& report, double validity_cut = 1.0);

/// Row k is the parameter-shift gradient of the shifted-gate energy
/// <psi_k|H|psi_k> at theta (gate k's angle offset by +pi/2). q x num_params.
Eigen::MatrixXd noisy_gradients(const Circuit& circuit, const ParamMap& map,
                                std::span<const double> params, const Hamiltonian& h);

/// Second derivatives of the energy via nested parameter shifts (four
/// double-shifted evaluations per gate pair), symmetrized.
Eigen::MatrixXd hessian(const Circuit& circuit, const ParamMap& map,
                        std::span<const double> params, const Hamiltonian& h);

struct OptimumShift {
  std::vector<double> delta_theta_star;
  /// Quadratic-model energy improvement at the shifted optimum,
  /// 1/2 d^T H d + sum_k a_k d^T B^k evaluated at d = delta_theta_star;
  /// always <= 0.
  double predicted_gain = 0.0;
  int hessian_rank = 0;
};

/// Noise-induced shift of the optimal parameters,
///   delta_theta* = - sum_k a_k Hinv B^k,  a_k = s(sigma_k),
/// with Hinv a regularized pseudo-inverse (eigenvalues below 1e-8 * max are
/// treated as flat directions from parameter redundancy and discarded).
/// Requires per-gate grouping and a stationary input point (gradient
/// infinity-norm < 1e-5); throws std::invalid_argument otherwise.
OptimumShift optimum_shift(const Circuit& circuit, const ParamMap& map,
                           std::span<const double> params_star, const Hamiltonian& h,
                           const NoiseSpec& spec);

/// JSON summary {E_star, E_g, delta, E_m, bounds, sigma_threshold, fit_c,
/// max_valid_sigma} used by the CLI and by downstream plotting.
std::string analysis_summary_json(double e_star, const SpectralData& spec,
                                  const StabilityBounds& bounds, const SigmaThreshold& threshold,
                                  const QuadraticFit& fit);

} // namespace vqn
