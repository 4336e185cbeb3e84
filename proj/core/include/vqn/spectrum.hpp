#pragma once

#include <vector>

#include "vqn/hamiltonian.hpp"
#include "vqn/state.hpp"

namespace vqn {

/// Exact spectral summary. The gap is measured to the first eigenvalue
/// strictly above the ground level (levels grouped with kLevelTolerance), so
/// degenerate ground spaces report the physically meaningful gap and the
/// ground basis spans the whole degenerate subspace.
struct SpectralData {
  double ground_energy = 0.0;
  double gap = 0.0; // 0 only for single-level spectra
  double max_energy = 0.0;
  std::vector<StateVector> ground_basis; // orthonormal
  int degeneracy = 0;
};

/// Diagonal Hamiltonians are scanned in O(2^n); general ones use a dense
/// Hermitian eigendecomposition. Throws when 2^n exceeds the configured caps.
SpectralData spectral_data(const Hamiltonian& h);

/// Squared norm of the projection of psi onto the ground subspace, in [0, 1].
double ground_overlap(const StateVector& psi, const SpectralData& spec);

} // namespace vqn
