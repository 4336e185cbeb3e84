#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace vqn {

enum class PauliOp : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(PauliOp op);
PauliOp pauli_from_char(char c);

/// Signed tensor product of single-qubit Pauli operators.
///
/// Every such operator A is involutory (A^2 = 1), so the one-parameter gate
/// family exp(i*A*angle) = cos(angle)*1 + i*sin(angle)*A is the generator
/// class used by all circuits in this library. The action on a computational
/// basis state is A|b> = phase_for(b) * |b XOR x_mask()>, which is what the
/// O(2^n) in-place kernels in state.cpp exploit.
class PauliString {
public:
  /// Identity string on num_qubits qubits.
  explicit PauliString(int num_qubits, int sign = +1);

  /// String with the given (qubit, op) factors; unlisted qubits are I.
  PauliString(int num_qubits, const std::vector<std::pair<int, PauliOp>>& factors,
              int sign = +1);

  static PauliString single(int num_qubits, int qubit, PauliOp op, int sign = +1);

  /// Label convention: character k of the label is the operator on qubit k,
  /// e.g. "XZI" is X on qubit 0, Z on qubit 1.
  static PauliString from_label(const std::string& label, int sign = +1);

  int num_qubits() const { return num_qubits_; }
  int sign() const { return sign_; }
  PauliOp op(int qubit) const { return ops_[static_cast<std::size_t>(qubit)]; }

  /// Qubits carrying X or Y (the operator flips these index bits).
  std::uint64_t x_mask() const { return x_mask_; }
  /// Qubits carrying Y or Z (these contribute basis-dependent signs).
  std::uint64_t phase_mask() const { return phase_mask_; }

  bool is_identity() const;
  /// True when the string contains only I and Z factors.
  bool is_diagonal() const { return x_mask_ == 0; }
  int weight() const;
  std::string label() const;

  /// Phase of A|b> relative to |b XOR x_mask()>.
  std::complex<double> phase_for(std::uint64_t basis_index) const;

  bool operator==(const PauliString& other) const;

private:
  int num_qubits_;
  int sign_;
  std::vector<PauliOp> ops_;
  std::uint64_t x_mask_ = 0;
  std::uint64_t phase_mask_ = 0;
  std::complex<double> base_phase_{1.0, 0.0}; // sign * i^{#Y}

  void rebuild_masks();
};

} // namespace vqn
