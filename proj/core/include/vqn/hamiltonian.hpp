#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vqn/pauli.hpp"
#include "vqn/state.hpp"

namespace vqn {

struct PauliTerm {
  double coeff = 0.0;
  PauliString pauli;
};

/// Weighted sum of Pauli strings. Hermitian by construction (real
/// coefficients). Problem builders attach a diagonal cache computed by a
/// combinatorial route (clause counting, edge counting); the cache must agree
/// with the Pauli expansion, which the test suite checks term by term.
class Hamiltonian {
public:
  Hamiltonian(int num_qubits, std::vector<PauliTerm> terms);
  Hamiltonian(int num_qubits, std::vector<PauliTerm> terms, std::vector<double> diagonal);

  int num_qubits() const { return num_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool has_diagonal() const { return diagonal_.has_value(); }
  const std::vector<double>& diagonal() const { return *diagonal_; }

  /// True when every term is an I/Z string.
  bool terms_all_diagonal() const;

  /// Sum of the coefficients of identity terms.
  double identity_constant() const;

  /// Diagonal reconstructed from the term list in O(terms * 2^n); used to
  /// validate the cache, and to build one for diagonal Hamiltonians created
  /// without a combinatorial source.
  std::vector<double> diagonal_from_terms() const;

private:
  int num_qubits_;
  std::vector<PauliTerm> terms_;
  std::optional<std::vector<double>> diagonal_;
};

/// <psi|H|psi>. Uses the diagonal cache when available.
double expectation(const StateVector& psi, const Hamiltonian& h);
/// Tr(rho H).
double expectation(const DensityMatrix& rho, const Hamiltonian& h);
/// H|psi>.
StateVector apply_hamiltonian(const StateVector& psi, const Hamiltonian& h);

// ---------------------------------------------------------------------------
// Problem encodings
// ---------------------------------------------------------------------------

/// One 3-SAT clause in DIMACS convention: literal +v means variable v,
/// -v its negation, v in [1, num_vars].
struct CnfClause {
  std::array<int, 3> literals{};
};

struct CnfInstance {
  int num_vars = 0;
  std::vector<CnfClause> clauses;

  void validate() const; // throws std::invalid_argument
  /// Variable v is true iff bit (v-1) of assignment is set.
  bool clause_satisfied(const CnfClause& c, std::uint64_t assignment) const;
  int violated_count(std::uint64_t assignment) const;
};

/// Simple undirected graph; edges are stored normalized (u < v), deduplicated.
struct Graph {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;

  void validate() const; // throws std::invalid_argument
  static Graph from_edges(int num_vertices, std::vector<std::pair<int, int>> edges);
};

/// Transverse-field Ising chain with periodic boundary:
///   H = sum_j Z_j Z_{j+1} + h sum_j X_j,   Z_{n+1} = Z_1.
Hamiltonian build_ising(int n, double h);

/// Clause-violation-count Hamiltonian: the diagonal entry of basis state z is
/// the number of clauses the assignment z violates.
Hamiltonian build_3sat(const CnfInstance& instance);

/// H = sum_{(i,j) in E} Z_i Z_j.
Hamiltonian build_maxcut(const Graph& g);

/// H = 1 - |t><t| : diagonal 0 at t, 1 elsewhere; the Pauli expansion has
/// 2^n strings.
Hamiltonian build_search(int n, std::uint64_t target);

/// Expansion of prod_k (I + (-1)^{bit_k} Z_{qubit_k}) / 2 into 2^k signed
/// Z-strings with coefficients +/- 2^{-k}. Throws on duplicate qubits.
std::vector<PauliTerm> pauli_decompose_projector(
    int num_qubits, std::span<const std::pair<int, int>> bits);

} // namespace vqn
