#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "vqn/ansatz.hpp"
#include "vqn/circuit.hpp"
#include "vqn/hamiltonian.hpp"

namespace vqn {

double energy_value(const Circuit& circuit, std::span<const double> params, const Hamiltonian& h);

/// Exact gradient with respect to the logical parameters via the shift rule
/// for involutory generators: for a gate at effective angle phi,
/// dE/dphi = E(phi + pi/4) - E(phi - pi/4), and a logical parameter collects
/// coeff-weighted contributions from every gate it drives. 2q evaluations.
std::vector<double> energy_gradient(const Circuit& circuit, const ParamMap& map,
                                    std::span<const double> params, const Hamiltonian& h);

/// Same values as energy_gradient (to machine precision) computed by one
/// forward/backward statevector sweep; this is the optimizer's inner loop.
std::vector<double> energy_gradient_adjoint(const Circuit& circuit, const ParamMap& map,
                                            std::span<const double> params,
                                            const Hamiltonian& h);

struct MinimizeOptions {
  int max_iterations = 2000;
  double grad_tolerance = 1e-7; // infinity norm
  int lbfgs_history = 10;
  int threads = 1;
};

struct OptResult {
  std::vector<double> params_star;
  double energy_star = 0.0;
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
  std::optional<double> t_exec; // filled for QAOA parameter maps
};

/// fn(x, grad_out) returns the objective value and fills grad_out.
using ValueAndGradFn = std::function<double(std::span<const double>, std::span<double>)>;

struct FunctionMinimum {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// The L-BFGS engine behind minimize, usable for any smooth objective (the
/// analysis suite reoptimizes exact-channel energies with it). Deterministic;
/// non-finite objectives terminate the run instead of throwing.
FunctionMinimum minimize_function(const ValueAndGradFn& fn, std::vector<double> x0,
                                  const MinimizeOptions& options = {});

/// Best of `restarts` L-BFGS runs from seeded uniform-in-box initial points.
/// Parameters are treated as unconstrained reals during the search (the
/// energy is periodic); boxes matter only for initialization and time
/// accounting. Deterministic for a fixed seed, independent of thread count.
/// Divergence is reported as converged = false, never an exception.
OptResult minimize(const Circuit& circuit, const ParamMap& map, const Hamiltonian& h,
                   int restarts, std::uint64_t seed, const MinimizeOptions& options = {});

/// Minimize E subject to execution_time(params) <= t_max, via an exterior
/// quadratic penalty with escalation followed by exact radial projection of
/// the angles onto the feasible set; the returned point always satisfies the
/// constraint. warm_starts are added to the initial points (projected first).
OptResult minimize_constrained(const Circuit& circuit, const ParamMap& map,
                               const Hamiltonian& h, double t_max, int restarts,
                               std::uint64_t seed,
                               const std::vector<std::vector<double>>& warm_starts = {},
                               const MinimizeOptions& options = {});

struct ScanCell {
  int depth = 0;
  double t_max = 0.0;
  double e_star = 0.0;
  double t_exec = 0.0;
  double overlap = 0.0;
  bool converged = false;
  std::vector<double> params_star;
};

struct Plateau {
  int depth = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  double energy = 0.0;
};

struct ScanTable {
  std::vector<int> depths;
  std::vector<double> budgets;
  std::vector<ScanCell> cells; // row-major: depths x budgets
  std::vector<Plateau> plateaus;

  const ScanCell& cell(std::size_t depth_idx, std::size_t budget_idx) const {
    return cells[depth_idx * budgets.size() + budget_idx];
  }
};

struct ScanOptions {
  int restarts = 8;
  std::uint64_t seed = 1;
  MinimizeOptions minimize;
  /// Energy improvements below this between consecutive budgets count as
  /// stagnation; a plateau is a maximal stagnant run of >= 2 cells.
  double plateau_tolerance = 1e-6;
  QaoaMode mode = QaoaMode::Decomposed;
};

/// E*(p, t_max) over a depth range and a budget grid. Each cell is
/// warm-started with the best parameters of the previous budget (same depth)
/// and of the previous depth (same budget, padded with a zero layer), which
/// makes E* exactly non-increasing along both axes.
ScanTable depth_time_scan(const Hamiltonian& h, std::span<const int> depths,
                          std::span<const double> budgets, const ScanOptions& options);

} // namespace vqn
