#include "vqn/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "vqn/parallel.hpp"
#include "vqn/rng.hpp"
#include "vqn/spectrum.hpp"

namespace vqn {
namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// <l| A |r> without materializing A|r>.
cdouble pauli_matrix_element(const StateVector& l, const PauliString& a, const StateVector& r) {
  const std::uint64_t x = a.x_mask();
  cdouble s{0.0, 0.0};
  for (std::size_t i = 0; i < l.dim(); ++i)
    s += std::conj(l.amp(i)) * a.phase_for(i ^ x) * r.amp(i ^ x);
  return s;
}

} // namespace

double energy_value(const Circuit& circuit, std::span<const double> params, const Hamiltonian& h) {
  return expectation(run_circuit(circuit, params), h);
}

std::vector<double> energy_gradient(const Circuit& circuit, const ParamMap& map,
                                    std::span<const double> params, const Hamiltonian& h) {
  if (params.size() != static_cast<std::size_t>(circuit.num_params))
    throw std::invalid_argument("energy_gradient: parameter vector length mismatch");
  (void)map;
  std::vector<double> grad(static_cast<std::size_t>(circuit.num_params), 0.0);
  std::vector<double> offsets(circuit.gates.size(), 0.0);
  for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
    offsets[k] = kQuarterPi;
    const double e_plus = expectation(run_circuit_with_offsets(circuit, params, offsets), h);
    offsets[k] = -kQuarterPi;
    const double e_minus = expectation(run_circuit_with_offsets(circuit, params, offsets), h);
    offsets[k] = 0.0;
    const Gate& g = circuit.gates[k];
    grad[static_cast<std::size_t>(g.param_id)] += g.coeff * (e_plus - e_minus);
  }
  return grad;
}

std::vector<double> energy_gradient_adjoint(const Circuit& circuit, const ParamMap& map,
                                            std::span<const double> params,
                                            const Hamiltonian& h) {
  if (params.size() != static_cast<std::size_t>(circuit.num_params))
    throw std::invalid_argument("energy_gradient: parameter vector length mismatch");
  (void)map;
  std::vector<double> grad(static_cast<std::size_t>(circuit.num_params), 0.0);
  StateVector phi = run_circuit(circuit, params);
  StateVector lam = apply_hamiltonian(phi, h);
  for (std::size_t k = circuit.gates.size(); k-- > 0;) {
    const Gate& g = circuit.gates[k];
    // d<H>/d(angle_k) = 2 Re <lam| iA |phi> = -2 Im <lam|A|phi>.
    const double d_angle = -2.0 * pauli_matrix_element(lam, g.generator, phi).imag();
    grad[static_cast<std::size_t>(g.param_id)] += g.coeff * d_angle;
    const double angle = g.angle(params);
    apply_gate_inplace(phi, g.generator, -angle);
    apply_gate_inplace(lam, g.generator, -angle);
  }
  return grad;
}

// ---------------------------------------------------------------------------
// L-BFGS with Armijo backtracking
// ---------------------------------------------------------------------------

namespace {

struct LbfgsOutcome {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(const std::vector<double>&, std::vector<double>&)>;

LbfgsOutcome lbfgs(const Objective& fg, std::vector<double> x, const MinimizeOptions& opt) {
  const std::size_t d = x.size();
  LbfgsOutcome out;
  std::vector<double> grad(d, 0.0);
  double f = fg(x, grad);
  if (!std::isfinite(f) || !all_finite(grad)) {
    out.x = std::move(x);
    return out;
  }

  const std::size_t m = static_cast<std::size_t>(std::max(1, opt.lbfgs_history));
  std::vector<std::vector<double>> s_hist, y_hist;
  std::vector<double> rho_hist;

  int stagnant = 0;
  int iter = 0;
  for (; iter < opt.max_iterations; ++iter) {
    if (inf_norm(grad) < opt.grad_tolerance) {
      out.converged = true;
      break;
    }

    // Two-loop recursion for the search direction.
    std::vector<double> dir = grad;
    std::vector<double> alpha(s_hist.size(), 0.0);
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alpha[i] = rho_hist[i] * dot(s_hist[i], dir);
      for (std::size_t j = 0; j < d; ++j) dir[j] -= alpha[i] * y_hist[i][j];
    }
    if (!s_hist.empty()) {
      const auto& s = s_hist.back();
      const auto& y = y_hist.back();
      const double scale = dot(s, y) / std::max(dot(y, y), 1e-300);
      for (double& v : dir) v *= scale;
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * dot(y_hist[i], dir);
      for (std::size_t j = 0; j < d; ++j) dir[j] += (alpha[i] - beta) * s_hist[i][j];
    }
    for (double& v : dir) v = -v;

    double slope = dot(grad, dir);
    if (!(slope < 0.0)) { // not a descent direction; fall back to steepest descent
      for (std::size_t j = 0; j < d; ++j) dir[j] = -grad[j];
      slope = dot(grad, dir);
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    // Backtracking Armijo search.
    double step = 1.0;
    std::vector<double> x_new(d), grad_new(d);
    double f_new = f;
    bool accepted = false;
    for (int halvings = 0; halvings < 40; ++halvings) {
      for (std::size_t j = 0; j < d; ++j) x_new[j] = x[j] + step * dir[j];
      f_new = fg(x_new, grad_new);
      if (std::isfinite(f_new) && all_finite(grad_new) && f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break; // no further progress possible at this scale

    // Stop once decreases sink below double resolution of f; the gradient
    // cannot be certified any further through the energy.
    if (f - f_new <= 4e-16 * (1.0 + std::abs(f))) {
      if (++stagnant >= 3) {
        x = std::move(x_new);
        f = f_new;
        grad = grad_new;
        ++iter;
        break;
      }
    } else {
      stagnant = 0;
    }

    std::vector<double> s(d), y(d);
    for (std::size_t j = 0; j < d; ++j) {
      s[j] = x_new[j] - x[j];
      y[j] = grad_new[j] - grad[j];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12 * std::sqrt(dot(s, s)) * std::sqrt(dot(y, y))) {
      if (s_hist.size() == m) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    x = std::move(x_new);
    f = f_new;
    grad = grad_new;
  }

  if (!out.converged && inf_norm(grad) < opt.grad_tolerance) out.converged = true;
  out.x = std::move(x);
  out.f = f;
  out.iterations = iter;
  return out;
}

} // namespace

FunctionMinimum minimize_function(const ValueAndGradFn& fn, std::vector<double> x0,
                                  const MinimizeOptions& options) {
  const Objective adapter = [&fn](const std::vector<double>& x, std::vector<double>& grad) {
    grad.resize(x.size());
    return fn(std::span<const double>(x), std::span<double>(grad));
  };
  LbfgsOutcome outcome = lbfgs(adapter, std::move(x0), options);
  return {std::move(outcome.x), outcome.f, outcome.iterations, outcome.converged};
}

namespace {

std::vector<double> random_point_in_boxes(const ParamMap& map, std::mt19937_64& rng) {
  std::vector<double> x(static_cast<std::size_t>(map.num_logical));
  for (int k = 0; k < map.num_logical; ++k) {
    const auto& box = map.boxes[static_cast<std::size_t>(k)];
    x[static_cast<std::size_t>(k)] = uniform_in(rng, box.first, box.second);
  }
  return x;
}

struct Candidate {
  LbfgsOutcome outcome;
  std::size_t order = 0;
};

/// Lowest energy wins; ties break on candidate order so parallel and serial
/// runs agree exactly.
const Candidate* best_candidate(const std::vector<Candidate>& candidates) {
  const Candidate* best = nullptr;
  for (const Candidate& c : candidates) {
    if (!std::isfinite(c.outcome.f)) continue;
    if (best == nullptr || c.outcome.f < best->outcome.f ||
        (c.outcome.f == best->outcome.f && c.order < best->order))
      best = &c;
  }
  return best;
}

} // namespace

OptResult minimize(const Circuit& circuit, const ParamMap& map, const Hamiltonian& h,
                   int restarts, std::uint64_t seed, const MinimizeOptions& options) {
  if (restarts < 1) throw std::invalid_argument("minimize: restarts must be >= 1");
  map.validate(circuit);

  const Objective fg = [&](const std::vector<double>& x, std::vector<double>& grad) {
    grad = energy_gradient_adjoint(circuit, map, x, h);
    return energy_value(circuit, x, h);
  };

  std::vector<Candidate> candidates(static_cast<std::size_t>(restarts));
  parallel_for(static_cast<std::size_t>(restarts), options.threads, [&](std::size_t r) {
    auto rng = make_rng(derive_seed(seed, r));
    candidates[r].outcome = lbfgs(fg, random_point_in_boxes(map, rng), options);
    candidates[r].order = r;
  });

  const Candidate* best = best_candidate(candidates);
  OptResult result;
  result.restarts_used = restarts;
  if (best == nullptr) {
    // Every restart diverged; report the first initial point, unconverged.
    auto rng = make_rng(derive_seed(seed, 0));
    result.params_star = random_point_in_boxes(map, rng);
    result.energy_star = energy_value(circuit, result.params_star, h);
    result.converged = false;
  } else {
    result.params_star = best->outcome.x;
    result.energy_star = best->outcome.f;
    result.iterations = best->outcome.iterations;
    result.converged = best->outcome.converged;
  }
  if (map.is_qaoa()) result.t_exec = execution_time(map, result.params_star);
  return result;
}

namespace {

/// Wrap into the boxes, then scale radially so the angle sum meets the
/// budget. Feasible by construction: execution_time equals the plain sum for
/// in-box values.
std::vector<double> project_feasible(const ParamMap& map, std::vector<double> x, double t_max) {
  double sum = 0.0;
  for (int k = 0; k < map.num_logical; ++k) {
    const auto& box = map.boxes[static_cast<std::size_t>(k)];
    x[static_cast<std::size_t>(k)] = wrap_angle(x[static_cast<std::size_t>(k)], box.second);
    sum += x[static_cast<std::size_t>(k)];
  }
  if (sum > t_max) {
    const double scale = t_max <= 0.0 ? 0.0 : t_max / sum;
    for (double& v : x) v *= scale;
  }
  return x;
}

} // namespace

OptResult minimize_constrained(const Circuit& circuit, const ParamMap& map, const Hamiltonian& h,
                               double t_max, int restarts, std::uint64_t seed,
                               const std::vector<std::vector<double>>& warm_starts,
                               const MinimizeOptions& options) {
  if (t_max < 0.0) throw std::invalid_argument("minimize_constrained: t_max must be >= 0");
  if (restarts < 1) throw std::invalid_argument("minimize_constrained: restarts must be >= 1");
  map.validate(circuit);
  if (!map.is_qaoa())
    throw std::invalid_argument("minimize_constrained: requires a QAOA parameter map");
  const std::size_t d = static_cast<std::size_t>(map.num_logical);
  for (const auto& w : warm_starts)
    if (w.size() != d)
      throw std::invalid_argument("minimize_constrained: warm start has wrong length");

  auto penalized = [&](double mu) -> Objective {
    return [&, mu](const std::vector<double>& x, std::vector<double>& grad) {
      grad = energy_gradient_adjoint(circuit, map, x, h);
      double f = energy_value(circuit, x, h);
      double sum = 0.0;
      for (double v : x) sum += v;
      const double excess = sum - t_max;
      if (excess > 0.0) {
        f += mu * excess * excess;
        for (double& g : grad) g += 2.0 * mu * excess;
      }
      for (std::size_t k = 0; k < d; ++k) {
        const auto& box = map.boxes[k];
        if (x[k] < 0.0) {
          f += mu * x[k] * x[k];
          grad[k] += 2.0 * mu * x[k];
        } else if (x[k] > box.second) {
          const double over = x[k] - box.second;
          f += mu * over * over;
          grad[k] += 2.0 * mu * over;
        }
      }
      return f;
    };
  };

  // Initial points: seeded random draws projected into the feasible set, the
  // caller's warm starts, and the all-zero point.
  std::vector<std::vector<double>> starts;
  starts.reserve(static_cast<std::size_t>(restarts) + warm_starts.size() + 1);
  for (int r = 0; r < restarts; ++r) {
    auto rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    starts.push_back(project_feasible(map, random_point_in_boxes(map, rng), t_max));
  }
  const std::size_t first_warm = starts.size();
  for (const auto& w : warm_starts) starts.push_back(project_feasible(map, w, t_max));
  starts.push_back(std::vector<double>(d, 0.0));

  static const double kMuStages[] = {1e2, 1e4, 1e6};
  std::vector<Candidate> candidates(starts.size());
  parallel_for(starts.size(), options.threads, [&](std::size_t i) {
    std::vector<double> x = starts[i];
    int iterations = 0;
    bool converged = false;
    for (double mu : kMuStages) {
      LbfgsOutcome stage = lbfgs(penalized(mu), std::move(x), options);
      x = std::move(stage.x);
      iterations += stage.iterations;
      converged = stage.converged;
    }
    // Exact feasibility, then score by the true energy.
    std::vector<double> projected = project_feasible(map, std::move(x), t_max);
    Candidate c;
    c.outcome.x = std::move(projected);
    c.outcome.f = energy_value(circuit, c.outcome.x, h);
    c.outcome.iterations = iterations;
    c.outcome.converged = converged;
    c.order = i;
    candidates[i] = std::move(c);
  });

  // The projected warm starts (and the zero point) also compete verbatim: a
  // local search may drift off a feasible point and land worse after
  // projection, and warm-start monotonicity must hold exactly.
  for (std::size_t i = first_warm; i < starts.size(); ++i) {
    Candidate c;
    c.outcome.x = starts[i];
    c.outcome.f = energy_value(circuit, c.outcome.x, h);
    c.outcome.iterations = 0;
    c.outcome.converged = true;
    c.order = starts.size() + i;
    candidates.push_back(std::move(c));
  }

  const Candidate* best = best_candidate(candidates);
  OptResult result;
  result.restarts_used = restarts;
  result.params_star = best->outcome.x;
  result.energy_star = best->outcome.f;
  result.iterations = best->outcome.iterations;
  result.converged = best->outcome.converged;
  result.t_exec = execution_time(map, result.params_star);
  return result;
}

ScanTable depth_time_scan(const Hamiltonian& h, std::span<const int> depths,
                          std::span<const double> budgets, const ScanOptions& options) {
  if (depths.empty() || budgets.empty())
    throw std::invalid_argument("depth_time_scan: grids must be non-empty");
  if (!std::is_sorted(depths.begin(), depths.end()) ||
      !std::is_sorted(budgets.begin(), budgets.end()))
    throw std::invalid_argument("depth_time_scan: grids must be ascending");

  const SpectralData spec = spectral_data(h);
  ScanTable table;
  table.depths.assign(depths.begin(), depths.end());
  table.budgets.assign(budgets.begin(), budgets.end());
  table.cells.resize(depths.size() * budgets.size());

  for (std::size_t di = 0; di < depths.size(); ++di) {
    const AnsatzCircuit ansatz = qaoa_build(h, depths[di], options.mode);
    const std::size_t d = static_cast<std::size_t>(ansatz.map.num_logical);
    for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
      std::vector<std::vector<double>> warm;
      if (bi > 0) warm.push_back(table.cell(di, bi - 1).params_star);
      if (di > 0) {
        // Extend the shallower optimum with identity layers: same state, same
        // execution time, so monotonicity in depth is exact.
        std::vector<double> padded = table.cell(di - 1, bi).params_star;
        padded.resize(d, 0.0);
        warm.push_back(std::move(padded));
      }
      OptResult r = minimize_constrained(
          ansatz.circuit, ansatz.map, h, budgets[bi], options.restarts,
          derive_seed(options.seed, di, bi), warm, options.minimize);
      ScanCell& cell = table.cells[di * budgets.size() + bi];
      cell.depth = depths[di];
      cell.t_max = budgets[bi];
      cell.e_star = r.energy_star;
      cell.t_exec = r.t_exec.value_or(0.0);
      cell.overlap = ground_overlap(run_circuit(ansatz.circuit, r.params_star), spec);
      cell.converged = r.converged;
      cell.params_star = std::move(r.params_star);
    }
  }

  // Plateaus: maximal runs of >= 2 consecutive budgets whose energy stops
  // improving (improvement <= plateau_tolerance between neighbours).
  for (std::size_t di = 0; di < depths.size(); ++di) {
    std::size_t run_start = 0;
    for (std::size_t bi = 1; bi <= budgets.size(); ++bi) {
      const bool stagnant =
          bi < budgets.size() &&
          table.cell(di, bi - 1).e_star - table.cell(di, bi).e_star <= options.plateau_tolerance;
      if (!stagnant) {
        if (bi - run_start >= 2) {
          table.plateaus.push_back({depths[di], budgets[run_start], budgets[bi - 1],
                                    table.cell(di, bi - 1).e_star});
        }
        run_start = bi;
      }
    }
  }
  return table;
}

} // namespace vqn
