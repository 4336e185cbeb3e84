#include "vqn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "vqn/constants.hpp"
#include "vqn/optimize.hpp"

namespace vqn {

namespace {
constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kHalfPi = std::numbers::pi / 2.0;
} // namespace

double StabilityBounds::clamped_lower() const { return std::clamp(lower, 0.0, 1.0); }
double StabilityBounds::clamped_upper() const { return std::clamp(upper, 0.0, 1.0); }

StabilityBounds stability_bounds(double energy, const SpectralData& spec) {
  const double spread = spec.max_energy - spec.ground_energy;
  if (spread <= kNumericTolerance)
    throw std::invalid_argument("stability_bounds: flat spectrum has no meaningful bound");
  StabilityBounds b;
  const double excess = energy - spec.ground_energy;
  b.lower = 1.0 - excess / spec.gap;
  b.upper = 1.0 - excess / spread;
  b.accepted = energy < spec.ground_energy + spec.gap;
  return b;
}

QuadraticFit fit_quadratic(const PerturbationReport& report, double validity_cut) {
  const std::size_t points = report.sigma_grid.size();
  std::vector<std::size_t> window;
  for (std::size_t i = 0; i < points; ++i) {
    const double sigma = report.sigma_grid[i];
    if (sigma > 0.0 &&
        static_cast<double>(report.gate_count) * sigma * sigma <= validity_cut)
      window.push_back(i);
  }
  if (window.size() < 3)
    throw std::invalid_argument("fit_quadratic: need at least 3 grid points under the cut");

  // Weighted least squares for dE = c sigma^2; weights from the standard
  // errors, floored so exact (zero-error) data stays usable.
  double floor_err = 0.0;
  for (std::size_t i : window) floor_err = std::max(floor_err, std::abs(report.mean_de[i]));
  floor_err = std::max(1e-15, 1e-6 * floor_err);
  double num = 0.0, den = 0.0;
  for (std::size_t i : window) {
    const double w = 1.0 / std::pow(std::max(report.std_error[i], floor_err), 2);
    const double s2 = report.sigma_grid[i] * report.sigma_grid[i];
    num += w * report.mean_de[i] * s2;
    den += w * s2 * s2;
  }

  QuadraticFit fit;
  fit.coefficient = num / den;
  fit.sigma_lo = report.sigma_grid[window.front()];
  fit.sigma_hi = report.sigma_grid[window.back()];

  double misfit = 0.0, scale = 0.0;
  for (std::size_t i : window) {
    const double predicted = fit.coefficient * report.sigma_grid[i] * report.sigma_grid[i];
    misfit += (report.mean_de[i] - predicted) * (report.mean_de[i] - predicted);
    scale += report.mean_de[i] * report.mean_de[i];
  }
  fit.residual = scale > 0.0 ? std::sqrt(misfit / scale) : 0.0;

  // Walk the full grid upward until the fit first misses by more than 10%.
  fit.max_valid_sigma = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    if (report.sigma_grid[i] <= 0.0) continue;
    const double predicted = fit.coefficient * report.sigma_grid[i] * report.sigma_grid[i];
    const double reference = std::abs(report.mean_de[i]);
    if (reference <= 0.0) break;
    if (std::abs(predicted - report.mean_de[i]) > 0.10 * reference) break;
    fit.max_valid_sigma = report.sigma_grid[i];
  }
  fit.valid = true;
  return fit;
}

Eigen::MatrixXd noisy_gradients(const Circuit& circuit, const ParamMap& map,
                                std::span<const double> params, const Hamiltonian& h) {
  map.validate(circuit);
  const std::size_t q = circuit.gates.size();
  const std::size_t d = static_cast<std::size_t>(map.num_logical);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q),
                                            static_cast<Eigen::Index>(d));
  std::vector<double> offsets(q, 0.0);
  for (std::size_t k = 0; k < q; ++k) {
    offsets[k] = kHalfPi; // psi_k: gate k's angle advanced by pi/2
    for (std::size_t g = 0; g < q; ++g) {
      const double keep = offsets[g];
      offsets[g] = keep + kQuarterPi;
      const double e_plus = expectation(run_circuit_with_offsets(circuit, params, offsets), h);
      offsets[g] = keep - kQuarterPi;
      const double e_minus = expectation(run_circuit_with_offsets(circuit, params, offsets), h);
      offsets[g] = keep;
      b(static_cast<Eigen::Index>(k), circuit.gates[g].param_id) +=
          circuit.gates[g].coeff * (e_plus - e_minus);
    }
    offsets[k] = 0.0;
  }
  return b;
}

Eigen::MatrixXd hessian(const Circuit& circuit, const ParamMap& map,
                        std::span<const double> params, const Hamiltonian& h) {
  map.validate(circuit);
  const std::size_t q = circuit.gates.size();
  const std::size_t d = static_cast<std::size_t>(map.num_logical);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                               static_cast<Eigen::Index>(d));
  std::vector<double> offsets(q, 0.0);
  auto energy_at = [&]() {
    return expectation(run_circuit_with_offsets(circuit, params, offsets), h);
  };
  // Shifts accumulate, so the a == b diagonal contribution degenerates to the
  // correct second-derivative formula E(phi+pi/2) - 2E(phi) + E(phi-pi/2).
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = a; b < q; ++b) {
      double mixed = 0.0;
      for (int sa : {+1, -1}) {
        for (int sb : {+1, -1}) {
          offsets[a] += sa * kQuarterPi;
          offsets[b] += sb * kQuarterPi;
          mixed += sa * sb * energy_at();
          offsets[a] = 0.0;
          offsets[b] = 0.0;
        }
      }
      const double w =
          circuit.gates[a].coeff * circuit.gates[b].coeff * mixed;
      const Eigen::Index pa = circuit.gates[a].param_id;
      const Eigen::Index pb = circuit.gates[b].param_id;
      hess(pa, pb) += w;
      if (a != b) hess(pb, pa) += w;
    }
  }
  // Symmetrize; off-diagonal pairs were accumulated once per orientation.
  Eigen::MatrixXd sym = 0.5 * (hess + hess.transpose());
  return sym;
}

OptimumShift optimum_shift(const Circuit& circuit, const ParamMap& map,
                           std::span<const double> params_star, const Hamiltonian& h,
                           const NoiseSpec& spec) {
  spec.validate();
  if (spec.grouping != NoiseGrouping::PerGate)
    throw std::invalid_argument("optimum_shift: per-gate grouping required");
  if (spec.sigmas.size() != circuit.gates.size())
    throw std::invalid_argument("optimum_shift: sigma count does not match the gate count");

  const std::vector<double> grad = energy_gradient(circuit, map, params_star, h);
  double g_norm = 0.0;
  for (double g : grad) g_norm = std::max(g_norm, std::abs(g));
  if (g_norm >= 1e-5)
    throw std::invalid_argument(
        "optimum_shift: input point is not stationary (gradient inf-norm >= 1e-5)");

  const Eigen::MatrixXd b_rows = noisy_gradients(circuit, map, params_star, h);
  const Eigen::MatrixXd hess = hessian(circuit, map, params_star, h);
  const std::size_t d = static_cast<std::size_t>(map.num_logical);

  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < circuit.gates.size(); ++k)
    b += sin_sq_moment(spec.sigmas[k]) * b_rows.row(static_cast<Eigen::Index>(k)).transpose();

  // Pseudo-inverse on the non-flat subspace: parameter redundancy makes exact
  // zero modes routine in variational circuits. At a converged minimum the
  // Hessian is PSD up to noise, so modes at or below the cutoff (including
  // spurious negatives) are discarded.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
  const Eigen::VectorXd& vals = eig.eigenvalues();
  const Eigen::MatrixXd& vecs = eig.eigenvectors();
  const double cutoff = 1e-8 * std::max(vals.cwiseAbs().maxCoeff(), 1e-300);

  OptimumShift shift;
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) <= cutoff) continue;
    ++shift.hessian_rank;
    delta -= (vecs.col(i).dot(b) / vals(i)) * vecs.col(i);
  }
  shift.delta_theta_star.assign(delta.data(), delta.data() + delta.size());
  shift.predicted_gain = 0.5 * delta.dot(hess * delta) + delta.dot(b);
  return shift;
}

std::string analysis_summary_json(double e_star, const SpectralData& spec,
                                  const StabilityBounds& bounds, const SigmaThreshold& threshold,
                                  const QuadraticFit& fit) {
  std::ostringstream os;
  os.precision(17);
  os << "{\n";
  os << "  \"E_star\": " << e_star << ",\n";
  os << "  \"E_g\": " << spec.ground_energy << ",\n";
  os << "  \"delta\": " << spec.gap << ",\n";
  os << "  \"E_m\": " << spec.max_energy << ",\n";
  os << "  \"bounds\": {\"lower\": " << bounds.lower << ", \"upper\": " << bounds.upper
     << ", \"lower_clamped\": " << bounds.clamped_lower()
     << ", \"upper_clamped\": " << bounds.clamped_upper()
     << ", \"accepted\": " << (bounds.accepted ? "true" : "false") << "},\n";
  if (threshold.unbounded)
    os << "  \"sigma_threshold\": \"inf\",\n";
  else
    os << "  \"sigma_threshold\": " << threshold.sigma << ",\n";
  os << "  \"fit_c\": " << fit.coefficient << ",\n";
  os << "  \"max_valid_sigma\": " << fit.max_valid_sigma << "\n";
  os << "}\n";
  return os.str();
}

} // namespace vqn
