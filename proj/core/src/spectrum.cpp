#include "vqn/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "vqn/constants.hpp"

namespace vqn {
namespace {

SpectralData from_diagonal(const Hamiltonian& h) {
  const auto& diag = h.diagonal();
  const double e_g = *std::min_element(diag.begin(), diag.end());
  const double e_m = *std::max_element(diag.begin(), diag.end());
  double first_excited = e_m;
  bool has_excited = false;
  std::vector<std::uint64_t> ground_indices;
  for (std::size_t b = 0; b < diag.size(); ++b) {
    if (diag[b] <= e_g + kLevelTolerance) {
      ground_indices.push_back(b);
    } else if (!has_excited || diag[b] < first_excited) {
      first_excited = diag[b];
      has_excited = true;
    }
  }
  SpectralData sd;
  sd.ground_energy = e_g;
  sd.max_energy = e_m;
  sd.gap = has_excited ? first_excited - e_g : 0.0;
  sd.degeneracy = static_cast<int>(ground_indices.size());
  sd.ground_basis.reserve(ground_indices.size());
  for (std::uint64_t b : ground_indices)
    sd.ground_basis.push_back(StateVector::basis_state(h.num_qubits(), b));
  return sd;
}

SpectralData from_dense(const Hamiltonian& h) {
  if (h.num_qubits() > limits::max_density_qubits())
    throw std::invalid_argument("spectral_data: dense eigensolve above the configured cap");
  const std::size_t dim = std::size_t{1} << h.num_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  for (const PauliTerm& t : h.terms()) {
    const std::uint64_t x = t.pauli.x_mask();
    for (std::size_t col = 0; col < dim; ++col)
      m(static_cast<Eigen::Index>(col ^ x), static_cast<Eigen::Index>(col)) +=
          t.coeff * t.pauli.phase_for(col);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectral_data: eigendecomposition failed");
  const auto& vals = solver.eigenvalues();
  const auto& vecs = solver.eigenvectors();
  SpectralData sd;
  sd.ground_energy = vals(0);
  sd.max_energy = vals(vals.size() - 1);
  sd.gap = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) <= sd.ground_energy + kLevelTolerance) {
      std::vector<cdouble> amps(dim);
      for (std::size_t b = 0; b < dim; ++b) amps[b] = vecs(static_cast<Eigen::Index>(b), i);
      sd.ground_basis.push_back(StateVector::from_amplitudes(h.num_qubits(), std::move(amps)));
    } else {
      sd.gap = vals(i) - sd.ground_energy;
      break;
    }
  }
  sd.degeneracy = static_cast<int>(sd.ground_basis.size());
  return sd;
}

} // namespace

SpectralData spectral_data(const Hamiltonian& h) {
  if (h.num_qubits() > limits::kMaxStateQubits)
    throw std::invalid_argument("spectral_data: qubit count exceeds the state cap");
  if (h.has_diagonal()) return from_diagonal(h);
  if (h.terms_all_diagonal()) {
    Hamiltonian cached(h.num_qubits(), h.terms(), h.diagonal_from_terms());
    return from_diagonal(cached);
  }
  return from_dense(h);
}

double ground_overlap(const StateVector& psi, const SpectralData& spec) {
  double overlap = 0.0;
  for (const StateVector& g : spec.ground_basis) overlap += std::norm(inner(g, psi));
  return overlap;
}

} // namespace vqn
