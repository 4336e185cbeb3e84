#include "vqn/instances.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vqn/rng.hpp"

namespace vqn {

std::uint64_t count_satisfying(const CnfInstance& instance) {
  instance.validate();
  if (instance.num_vars > 24)
    throw std::invalid_argument("count_satisfying: enumeration capped at 24 variables");
  std::uint64_t count = 0;
  const std::uint64_t total = std::uint64_t{1} << instance.num_vars;
  for (std::uint64_t z = 0; z < total; ++z)
    if (instance.violated_count(z) == 0) ++count;
  return count;
}

namespace {

CnfClause random_clause(int n, std::mt19937_64& rng) {
  // Three distinct variables by rejection, then independent uniform signs.
  int vars[3];
  for (int i = 0; i < 3; ++i) {
    for (;;) {
      const int v = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      bool fresh = true;
      for (int j = 0; j < i; ++j) fresh &= (vars[j] != v);
      if (fresh) {
        vars[i] = v;
        break;
      }
    }
  }
  CnfClause clause;
  for (int i = 0; i < 3; ++i) clause.literals[i] = (rng() & 1) ? vars[i] : -vars[i];
  return clause;
}

} // namespace

CnfInstance gen_3sat(int n, int m, bool unique, std::uint64_t seed, int max_attempts) {
  if (n < 3) throw std::invalid_argument("gen_3sat: need at least 3 variables");
  if (m < 1) throw std::invalid_argument("gen_3sat: need at least 1 clause");
  if (unique && n > 24)
    throw std::invalid_argument("gen_3sat: uniqueness verification capped at 24 variables");

  auto rng = make_rng(derive_seed(seed, 0x35a7ULL));
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    CnfInstance instance;
    instance.num_vars = n;
    instance.clauses.reserve(static_cast<std::size_t>(m));
    for (int c = 0; c < m; ++c) instance.clauses.push_back(random_clause(n, rng));
    if (!unique) return instance;
    if (count_satisfying(instance) == 1) return instance;
  }
  throw std::runtime_error(
      "gen_3sat: no uniquely satisfiable instance after " + std::to_string(max_attempts) +
      " attempts; the clause density is likely too low for uniqueness at this size");
}

Graph gen_maxcut(int n, double edge_prob, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_maxcut: need at least 1 vertex");
  if (edge_prob < 0.0 || edge_prob > 1.0)
    throw std::invalid_argument("gen_maxcut: edge_prob must lie in [0, 1]");
  auto rng = make_rng(derive_seed(seed, 0x6c07ULL));
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (uniform_unit(rng) < edge_prob) edges.emplace_back(u, v);
  return Graph::from_edges(n, std::move(edges));
}

std::vector<Hamiltonian> gen_ising_ensemble(int n, double h_min, double h_max, int count,
                                            std::uint64_t seed) {
  if (h_min > h_max) throw std::invalid_argument("gen_ising_ensemble: h_min must be <= h_max");
  if (count < 1) throw std::invalid_argument("gen_ising_ensemble: count must be >= 1");
  std::vector<Hamiltonian> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    auto rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    out.push_back(build_ising(n, uniform_in(rng, h_min, h_max)));
  }
  return out;
}

std::string problem_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Ising: return "ising";
    case ProblemKind::Sat3: return "sat3";
    case ProblemKind::MaxCut: return "maxcut";
    case ProblemKind::Search: return "search";
  }
  return "?";
}

ProblemKind problem_from_name(const std::string& name) {
  if (name == "ising") return ProblemKind::Ising;
  if (name == "sat3") return ProblemKind::Sat3;
  if (name == "maxcut") return ProblemKind::MaxCut;
  if (name == "search") return ProblemKind::Search;
  throw std::invalid_argument("unknown problem kind: " + name);
}

int ExperimentConfig::effective_restarts() const {
  if (restarts) return *restarts;
  return depth <= 10 ? 20 : 50;
}

void ExperimentConfig::validate() const {
  if (n < 1) throw std::invalid_argument("config: \"n\" must be positive");
  if (depth < 1) throw std::invalid_argument("config: \"depth\" must be positive");
  if (instance_count < 1)
    throw std::invalid_argument("config: \"instance_count\" must be positive");
  if (n_samples < 2) throw std::invalid_argument("config: \"n_samples\" must be at least 2");
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    if (sigma_grid[i] < 0.0)
      throw std::invalid_argument("config: \"sigma_grid\" entries must be non-negative");
    if (i > 0 && sigma_grid[i] < sigma_grid[i - 1])
      throw std::invalid_argument("config: \"sigma_grid\" must be ascending");
  }
  if (t_max && *t_max < 0.0) throw std::invalid_argument("config: \"t_max\" must be >= 0");
  if (restarts && *restarts < 1)
    throw std::invalid_argument("config: \"restarts\" must be positive");
  if (problem == ProblemKind::Ising) {
    if (h_min > h_max) throw std::invalid_argument("config: \"h_min\" must be <= \"h_max\"");
  }
  if (problem == ProblemKind::MaxCut) {
    if (edge_prob < 0.0 || edge_prob > 1.0)
      throw std::invalid_argument("config: \"edge_prob\" must lie in [0, 1]");
  }
  if (problem == ProblemKind::Sat3 && clauses < 0)
    throw std::invalid_argument("config: \"clauses\" must be non-negative");
  if (problem == ProblemKind::Search && target &&
      *target >= (std::uint64_t{1} << std::min(n, 63)))
    throw std::invalid_argument("config: \"target\" out of range for n qubits");
  for (int p : depth_range)
    if (p < 1) throw std::invalid_argument("config: \"depth_range\" entries must be positive");
  for (std::size_t i = 1; i < depth_range.size(); ++i)
    if (depth_range[i] <= depth_range[i - 1])
      throw std::invalid_argument("config: \"depth_range\" must be strictly ascending");
  for (std::size_t i = 0; i < t_max_grid.size(); ++i) {
    if (t_max_grid[i] < 0.0)
      throw std::invalid_argument("config: \"t_max_grid\" entries must be >= 0");
    if (i > 0 && t_max_grid[i] <= t_max_grid[i - 1])
      throw std::invalid_argument("config: \"t_max_grid\" must be strictly ascending");
  }
}

} // namespace vqn
