#include "vqn/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace vqn {

char pauli_char(PauliOp op) {
  switch (op) {
    case PauliOp::I: return 'I';
    case PauliOp::X: return 'X';
    case PauliOp::Y: return 'Y';
    case PauliOp::Z: return 'Z';
  }
  return '?';
}

PauliOp pauli_from_char(char c) {
  switch (c) {
    case 'I': return PauliOp::I;
    case 'X': return PauliOp::X;
    case 'Y': return PauliOp::Y;
    case 'Z': return PauliOp::Z;
    default: throw std::invalid_argument(std::string("not a Pauli label: ") + c);
  }
}

PauliString::PauliString(int num_qubits, int sign)
    : num_qubits_(num_qubits), sign_(sign),
      ops_(static_cast<std::size_t>(num_qubits), PauliOp::I) {
  if (num_qubits < 1 || num_qubits > 63)
    throw std::invalid_argument("PauliString: unsupported qubit count");
  if (sign != 1 && sign != -1) throw std::invalid_argument("PauliString: sign must be +1 or -1");
  rebuild_masks();
}

PauliString::PauliString(int num_qubits, const std::vector<std::pair<int, PauliOp>>& factors,
                         int sign)
    : PauliString(num_qubits, sign) {
  for (const auto& [qubit, op] : factors) {
    if (qubit < 0 || qubit >= num_qubits_)
      throw std::invalid_argument("PauliString: qubit index out of range");
    ops_[static_cast<std::size_t>(qubit)] = op;
  }
  rebuild_masks();
}

PauliString PauliString::single(int num_qubits, int qubit, PauliOp op, int sign) {
  return PauliString(num_qubits, {{qubit, op}}, sign);
}

PauliString PauliString::from_label(const std::string& label, int sign) {
  PauliString p(static_cast<int>(label.size()), sign);
  for (std::size_t q = 0; q < label.size(); ++q) p.ops_[q] = pauli_from_char(label[q]);
  p.rebuild_masks();
  return p;
}

void PauliString::rebuild_masks() {
  x_mask_ = 0;
  phase_mask_ = 0;
  int y_count = 0;
  for (int q = 0; q < num_qubits_; ++q) {
    const PauliOp op = ops_[static_cast<std::size_t>(q)];
    const std::uint64_t bit = std::uint64_t{1} << q;
    if (op == PauliOp::X || op == PauliOp::Y) x_mask_ |= bit;
    if (op == PauliOp::Y || op == PauliOp::Z) phase_mask_ |= bit;
    if (op == PauliOp::Y) ++y_count;
  }
  static const std::complex<double> i_powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  base_phase_ = static_cast<double>(sign_) * i_powers[y_count % 4];
}

bool PauliString::is_identity() const { return x_mask_ == 0 && phase_mask_ == 0; }

int PauliString::weight() const {
  return std::popcount(x_mask_ | phase_mask_);
}

std::string PauliString::label() const {
  std::string s(static_cast<std::size_t>(num_qubits_), 'I');
  for (int q = 0; q < num_qubits_; ++q) s[static_cast<std::size_t>(q)] = pauli_char(op(q));
  return s;
}

std::complex<double> PauliString::phase_for(std::uint64_t basis_index) const {
  const bool odd = (std::popcount(basis_index & phase_mask_) & 1) != 0;
  return odd ? -base_phase_ : base_phase_;
}

bool PauliString::operator==(const PauliString& other) const {
  return num_qubits_ == other.num_qubits_ && sign_ == other.sign_ && ops_ == other.ops_;
}

} // namespace vqn
