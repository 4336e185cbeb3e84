#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vqn/hamiltonian.hpp"

namespace vqn {

/// Number of satisfying assignments by 2^n enumeration.
std::uint64_t count_satisfying(const CnfInstance& instance);

/// m uniformly random clauses over 3 distinct variables with independent
/// uniform literal signs (duplicate clauses allowed). With unique = true,
/// whole instances are rejection-sampled until exactly one satisfying
/// assignment exists, preserving the conditional distribution; throws
/// std::runtime_error after max_attempts rejections (density too low for
/// uniqueness). Deterministic per seed.
CnfInstance gen_3sat(int n, int m, bool unique, std::uint64_t seed, int max_attempts = 200000);

/// Erdos-Renyi G(n, edge_prob); isolated vertices allowed.
Graph gen_maxcut(int n, double edge_prob, std::uint64_t seed);

/// Transverse-field Ising Hamiltonians with h drawn uniformly from
/// [h_min, h_max].
std::vector<Hamiltonian> gen_ising_ensemble(int n, double h_min, double h_max, int count,
                                            std::uint64_t seed);

enum class ProblemKind { Ising, Sat3, MaxCut, Search };

std::string problem_name(ProblemKind kind);
ProblemKind problem_from_name(const std::string& name);

/// Batch experiment description, read from versioned JSON (schema 1).
struct ExperimentConfig {
  ProblemKind problem = ProblemKind::Ising;
  int n = 0;
  int depth = 1;
  int instance_count = 1;
  std::vector<double> sigma_grid;
  long n_samples = 2000;
  std::uint64_t seed = 1;
  bool layerwise = false; // noise-correlation mode for QAOA circuits
  std::optional<double> t_max;

  // Problem-specific knobs.
  double h_min = 0.8, h_max = 1.2;     // ising
  int clauses = 0;                     // sat3 (0 = round(4.2 * n))
  bool unique_sat = true;              // sat3
  double edge_prob = 0.5;              // maxcut
  std::optional<std::uint64_t> target; // search (default 0)

  std::optional<int> restarts;         // default: 20 for depth <= 10, else 50
  std::vector<double> delta_grid;      // param-sweep
  std::vector<int> depth_range;        // time-scan, explicit depth list
  std::vector<double> t_max_grid;      // time-scan

  int effective_restarts() const;
  void validate() const; // throws std::invalid_argument with the field name
};

} // namespace vqn
