#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "vqn/pauli.hpp"

namespace vqn {

using cdouble = std::complex<double>;

/// Dense n-qubit pure state, 2^n amplitudes.
/// All free functions below are pure; in-place variants exist for the hot
/// paths and mutate only the object passed to them.
class StateVector {
public:
  static StateVector all_zero(int num_qubits);
  static StateVector all_plus(int num_qubits);
  static StateVector basis_state(int num_qubits, std::uint64_t index);
  static StateVector from_amplitudes(int num_qubits, std::vector<cdouble> amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  cdouble amp(std::size_t i) const { return amps_[i]; }
  cdouble& amp(std::size_t i) { return amps_[i]; }
  const std::vector<cdouble>& amplitudes() const { return amps_; }
  std::vector<cdouble>& amplitudes() { return amps_; }

  double norm() const;

private:
  StateVector(int num_qubits, std::vector<cdouble> amps);
  int num_qubits_;
  std::vector<cdouble> amps_;
};

cdouble inner(const StateVector& a, const StateVector& b); // <a|b>

/// |out> = A |in>
StateVector apply_pauli(const StateVector& in, const PauliString& a);
void apply_pauli_inplace(StateVector& state, const PauliString& a);

/// |out> = exp(i*A*angle) |in> = cos(angle)|in> + i sin(angle) A|in>
StateVector apply_gate(const StateVector& in, const PauliString& generator, double angle);
void apply_gate_inplace(StateVector& state, const PauliString& generator, double angle);

/// Dense n-qubit density matrix, 2^n x 2^n, row-major.
class DensityMatrix {
public:
  static DensityMatrix from_state(const StateVector& psi);
  static DensityMatrix zero(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return dim_; }
  cdouble entry(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }
  cdouble& entry(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
  const std::vector<cdouble>& data() const { return data_; }
  std::vector<cdouble>& data() { return data_; }

  double trace_real() const;
  double hermiticity_defect() const; // max |rho_ij - conj(rho_ji)|

private:
  DensityMatrix(int num_qubits, std::vector<cdouble> data);
  int num_qubits_;
  std::size_t dim_;
  std::vector<cdouble> data_;
};

/// rho -> U rho U^dag with U = exp(i*A*angle).
DensityMatrix apply_gate(const DensityMatrix& rho, const PauliString& generator, double angle);
void apply_gate_inplace(DensityMatrix& rho, const PauliString& generator, double angle);

/// Averaged single-gate noise channel,
///   rho -> U [(1-s) rho + s A rho A^dag] U^dag,  U = exp(i*A*angle).
///
/// This is the exact average of U(angle+d) rho U(angle+d)^dag over any
/// zero-symmetric distribution of d with <sin^2 d> = s; the cross terms
/// vanish because <sin d * cos d> = 0. Requires 0 <= s <= 1/2.
DensityMatrix apply_noisy_gate_channel(const DensityMatrix& rho, const PauliString& generator,
                                       double angle, double s);
void apply_noisy_gate_channel_inplace(DensityMatrix& rho, const PauliString& generator,
                                      double angle, double s);

} // namespace vqn
