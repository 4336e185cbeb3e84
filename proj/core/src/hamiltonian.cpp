#include "vqn/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#include "vqn/constants.hpp"

namespace vqn {

Hamiltonian::Hamiltonian(int num_qubits, std::vector<PauliTerm> terms)
    : num_qubits_(num_qubits), terms_(std::move(terms)) {
  for (const PauliTerm& t : terms_)
    if (t.pauli.num_qubits() != num_qubits_)
      throw std::invalid_argument("Hamiltonian: term qubit count mismatch");
}

Hamiltonian::Hamiltonian(int num_qubits, std::vector<PauliTerm> terms, std::vector<double> diagonal)
    : Hamiltonian(num_qubits, std::move(terms)) {
  if (diagonal.size() != (std::size_t{1} << num_qubits_))
    throw std::invalid_argument("Hamiltonian: diagonal cache has wrong length");
  if (!terms_all_diagonal())
    throw std::invalid_argument("Hamiltonian: diagonal cache on non-diagonal terms");
  diagonal_ = std::move(diagonal);
}

bool Hamiltonian::terms_all_diagonal() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const PauliTerm& t) { return t.pauli.is_diagonal(); });
}

double Hamiltonian::identity_constant() const {
  double c = 0.0;
  for (const PauliTerm& t : terms_)
    if (t.pauli.is_identity()) c += t.coeff * t.pauli.sign();
  return c;
}

std::vector<double> Hamiltonian::diagonal_from_terms() const {
  if (!terms_all_diagonal())
    throw std::logic_error("diagonal_from_terms: Hamiltonian has off-diagonal terms");
  const std::size_t dim = std::size_t{1} << num_qubits_;
  std::vector<double> diag(dim, 0.0);
  for (const PauliTerm& t : terms_) {
    for (std::size_t b = 0; b < dim; ++b) {
      // Diagonal strings have a real phase of +/-1 per basis state.
      diag[b] += t.coeff * t.pauli.phase_for(b).real();
    }
  }
  return diag;
}

double expectation(const StateVector& psi, const Hamiltonian& h) {
  if (psi.num_qubits() != h.num_qubits())
    throw std::invalid_argument("expectation: qubit count mismatch");
  if (h.has_diagonal()) {
    const auto& diag = h.diagonal();
    double e = 0.0;
    for (std::size_t b = 0; b < psi.dim(); ++b) e += diag[b] * std::norm(psi.amp(b));
    return e;
  }
  cdouble e{0.0, 0.0};
  for (const PauliTerm& t : h.terms()) {
    const std::uint64_t x = t.pauli.x_mask();
    cdouble val{0.0, 0.0};
    for (std::size_t i = 0; i < psi.dim(); ++i)
      val += std::conj(psi.amp(i)) * t.pauli.phase_for(i ^ x) * psi.amp(i ^ x);
    e += t.coeff * val;
  }
  return e.real();
}

double expectation(const DensityMatrix& rho, const Hamiltonian& h) {
  if (rho.num_qubits() != h.num_qubits())
    throw std::invalid_argument("expectation: qubit count mismatch");
  const std::size_t dim = rho.dim();
  if (h.has_diagonal()) {
    const auto& diag = h.diagonal();
    double e = 0.0;
    for (std::size_t b = 0; b < dim; ++b) e += diag[b] * rho.entry(b, b).real();
    return e;
  }
  cdouble e{0.0, 0.0};
  for (const PauliTerm& t : h.terms()) {
    const std::uint64_t x = t.pauli.x_mask();
    cdouble val{0.0, 0.0};
    // Tr(rho A) = sum_b rho_{b, b^x} phase(b).
    for (std::size_t b = 0; b < dim; ++b) val += rho.entry(b, b ^ x) * t.pauli.phase_for(b);
    e += t.coeff * val;
  }
  return e.real();
}

StateVector apply_hamiltonian(const StateVector& psi, const Hamiltonian& h) {
  if (psi.num_qubits() != h.num_qubits())
    throw std::invalid_argument("apply_hamiltonian: qubit count mismatch");
  if (h.has_diagonal()) {
    std::vector<cdouble> out(psi.dim());
    const auto& diag = h.diagonal();
    for (std::size_t b = 0; b < psi.dim(); ++b) out[b] = diag[b] * psi.amp(b);
    return StateVector::from_amplitudes(psi.num_qubits(), std::move(out));
  }
  std::vector<cdouble> out(psi.dim(), cdouble{0.0, 0.0});
  for (const PauliTerm& t : h.terms()) {
    const std::uint64_t x = t.pauli.x_mask();
    for (std::size_t i = 0; i < psi.dim(); ++i)
      out[i] += t.coeff * t.pauli.phase_for(i ^ x) * psi.amp(i ^ x);
  }
  return StateVector::from_amplitudes(psi.num_qubits(), std::move(out));
}

// ---------------------------------------------------------------------------
// Problem encodings
// ---------------------------------------------------------------------------

void CnfInstance::validate() const {
  if (num_vars < 1) throw std::invalid_argument("CnfInstance: num_vars must be positive");
  for (std::size_t c = 0; c < clauses.size(); ++c) {
    const auto& lits = clauses[c].literals;
    for (int lit : lits) {
      if (lit == 0 || std::abs(lit) > num_vars)
        throw std::invalid_argument("CnfInstance: literal out of range in clause " +
                                    std::to_string(c + 1));
    }
    if (std::abs(lits[0]) == std::abs(lits[1]) || std::abs(lits[0]) == std::abs(lits[2]) ||
        std::abs(lits[1]) == std::abs(lits[2]))
      throw std::invalid_argument("CnfInstance: repeated variable in clause " +
                                  std::to_string(c + 1));
  }
}

bool CnfInstance::clause_satisfied(const CnfClause& c, std::uint64_t assignment) const {
  for (int lit : c.literals) {
    const int var = std::abs(lit) - 1;
    const bool value = (assignment >> var) & 1;
    if (value == (lit > 0)) return true;
  }
  return false;
}

int CnfInstance::violated_count(std::uint64_t assignment) const {
  int count = 0;
  for (const CnfClause& c : clauses)
    if (!clause_satisfied(c, assignment)) ++count;
  return count;
}

void Graph::validate() const {
  if (num_vertices < 1) throw std::invalid_argument("Graph: num_vertices must be positive");
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= num_vertices || v >= num_vertices)
      throw std::invalid_argument("Graph: vertex index out of range");
    if (u == v) throw std::invalid_argument("Graph: self-loop");
  }
  auto sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("Graph: duplicate edge");
}

Graph Graph::from_edges(int num_vertices, std::vector<std::pair<int, int>> edges) {
  for (auto& [u, v] : edges)
    if (u > v) std::swap(u, v);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  Graph g{num_vertices, std::move(edges)};
  g.validate();
  return g;
}

Hamiltonian build_ising(int n, double h) {
  if (n < 2) throw std::invalid_argument("build_ising: n must be at least 2");
  std::vector<PauliTerm> terms;
  terms.reserve(static_cast<std::size_t>(2 * n));
  for (int j = 0; j < n; ++j) {
    terms.push_back({1.0, PauliString(n, {{j, PauliOp::Z}, {(j + 1) % n, PauliOp::Z}})});
  }
  if (h != 0.0) {
    for (int j = 0; j < n; ++j) terms.push_back({h, PauliString::single(n, j, PauliOp::X)});
    return Hamiltonian(n, std::move(terms));
  }
  Hamiltonian bare(n, terms);
  return Hamiltonian(n, std::move(terms), bare.diagonal_from_terms());
}

std::vector<PauliTerm> pauli_decompose_projector(
    int num_qubits, std::span<const std::pair<int, int>> bits) {
  for (std::size_t i = 0; i < bits.size(); ++i)
    for (std::size_t j = i + 1; j < bits.size(); ++j)
      if (bits[i].first == bits[j].first)
        throw std::invalid_argument("pauli_decompose_projector: duplicate qubit");
  const std::size_t k = bits.size();
  const double scale = std::ldexp(1.0, -static_cast<int>(k)); // 2^-k
  std::vector<PauliTerm> terms;
  terms.reserve(std::size_t{1} << k);
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << k); ++subset) {
    double coeff = scale;
    std::vector<std::pair<int, PauliOp>> factors;
    for (std::size_t i = 0; i < k; ++i) {
      if (!((subset >> i) & 1)) continue;
      factors.emplace_back(bits[i].first, PauliOp::Z);
      if (bits[i].second) coeff = -coeff;
    }
    terms.push_back({coeff, PauliString(num_qubits, factors)});
  }
  return terms;
}

namespace {

/// Merge diagonal terms with equal Z-supports, dropping negligible ones.
std::vector<PauliTerm> merge_diagonal_terms(int n, const std::vector<PauliTerm>& raw) {
  std::map<std::uint64_t, double> by_support;
  for (const PauliTerm& t : raw)
    by_support[t.pauli.phase_mask()] += t.coeff * t.pauli.sign();
  std::vector<PauliTerm> merged;
  merged.reserve(by_support.size());
  for (const auto& [support, coeff] : by_support) {
    if (std::abs(coeff) < 1e-12) continue;
    std::vector<std::pair<int, PauliOp>> factors;
    for (int q = 0; q < n; ++q)
      if ((support >> q) & 1) factors.emplace_back(q, PauliOp::Z);
    merged.push_back({coeff, PauliString(n, factors)});
  }
  return merged;
}

} // namespace

Hamiltonian build_3sat(const CnfInstance& instance) {
  instance.validate();
  const int n = instance.num_vars;
  std::vector<PauliTerm> raw;
  raw.reserve(instance.clauses.size() * 8);
  for (const CnfClause& clause : instance.clauses) {
    // The clause projector penalizes the assignment with every literal
    // false: literal +v is false when variable v is 0, literal -v when it
    // is 1.
    std::vector<std::pair<int, int>> bits;
    bits.reserve(3);
    for (int lit : clause.literals) bits.emplace_back(std::abs(lit) - 1, lit > 0 ? 0 : 1);
    auto clause_terms = pauli_decompose_projector(n, bits);
    raw.insert(raw.end(), clause_terms.begin(), clause_terms.end());
  }
  std::vector<PauliTerm> terms = merge_diagonal_terms(n, raw);
  if (n > limits::kMaxStateQubits) return Hamiltonian(n, std::move(terms));
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> diag(dim);
  for (std::uint64_t b = 0; b < dim; ++b)
    diag[b] = static_cast<double>(instance.violated_count(b));
  return Hamiltonian(n, std::move(terms), std::move(diag));
}

Hamiltonian build_maxcut(const Graph& g) {
  g.validate();
  const int n = g.num_vertices;
  std::vector<PauliTerm> terms;
  terms.reserve(g.edges.size());
  for (const auto& [u, v] : g.edges)
    terms.push_back({1.0, PauliString(n, {{u, PauliOp::Z}, {v, PauliOp::Z}})});
  if (n > limits::kMaxStateQubits) return Hamiltonian(n, std::move(terms));
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> diag(dim, 0.0);
  for (std::uint64_t b = 0; b < dim; ++b) {
    int value = 0;
    for (const auto& [u, v] : g.edges) value += (((b >> u) ^ (b >> v)) & 1) ? -1 : 1;
    diag[b] = static_cast<double>(value);
  }
  return Hamiltonian(n, std::move(terms), std::move(diag));
}

Hamiltonian build_search(int n, std::uint64_t target) {
  if (n < 1 || n > limits::kMaxStateQubits)
    throw std::invalid_argument("build_search: qubit count outside [1, 14]");
  if (target >= (std::uint64_t{1} << n))
    throw std::invalid_argument("build_search: target index out of range");
  std::vector<std::pair<int, int>> bits;
  bits.reserve(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) bits.emplace_back(q, static_cast<int>((target >> q) & 1));
  std::vector<PauliTerm> terms;
  terms.reserve(std::size_t{1} << n);
  terms.push_back({1.0, PauliString(n)});
  for (PauliTerm& t : pauli_decompose_projector(n, bits)) {
    t.coeff = -t.coeff;
    terms.push_back(std::move(t));
  }
  terms = merge_diagonal_terms(n, terms);
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> diag(dim, 1.0);
  diag[target] = 0.0;
  return Hamiltonian(n, std::move(terms), std::move(diag));
}

} // namespace vqn
