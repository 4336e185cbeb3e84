#include "vqn/state.hpp"

#include <cmath>
#include <stdexcept>

#include "vqn/constants.hpp"

namespace vqn {
namespace {

int density_cap = 10;

void check_state_qubits(int n) {
  if (n < 1 || n > limits::kMaxStateQubits)
    throw std::invalid_argument("StateVector: qubit count outside [1, 14]");
}

void check_density_qubits(int n) {
  if (n < 1 || n > limits::max_density_qubits())
    throw std::invalid_argument("DensityMatrix: qubit count exceeds the configured cap");
}

void check_match(int state_qubits, const PauliString& p) {
  if (state_qubits != p.num_qubits())
    throw std::invalid_argument("qubit count mismatch between state and Pauli string");
}

} // namespace

namespace limits {
int max_density_qubits() { return density_cap; }
void set_max_density_qubits(int n) {
  if (n < 1 || n > kMaxStateQubits)
    throw std::invalid_argument("max_density_qubits outside [1, 14]");
  density_cap = n;
}
} // namespace limits

StateVector::StateVector(int num_qubits, std::vector<cdouble> amps)
    : num_qubits_(num_qubits), amps_(std::move(amps)) {}

StateVector StateVector::all_zero(int num_qubits) {
  check_state_qubits(num_qubits);
  std::vector<cdouble> amps(std::size_t{1} << num_qubits, cdouble{0.0, 0.0});
  amps[0] = 1.0;
  return StateVector(num_qubits, std::move(amps));
}

StateVector StateVector::all_plus(int num_qubits) {
  check_state_qubits(num_qubits);
  const std::size_t dim = std::size_t{1} << num_qubits;
  const double a = 1.0 / std::sqrt(static_cast<double>(dim));
  std::vector<cdouble> amps(dim, cdouble{a, 0.0});
  return StateVector(num_qubits, std::move(amps));
}

StateVector StateVector::basis_state(int num_qubits, std::uint64_t index) {
  check_state_qubits(num_qubits);
  std::vector<cdouble> amps(std::size_t{1} << num_qubits, cdouble{0.0, 0.0});
  if (index >= amps.size()) throw std::invalid_argument("basis index out of range");
  amps[index] = 1.0;
  return StateVector(num_qubits, std::move(amps));
}

StateVector StateVector::from_amplitudes(int num_qubits, std::vector<cdouble> amplitudes) {
  check_state_qubits(num_qubits);
  if (amplitudes.size() != (std::size_t{1} << num_qubits))
    throw std::invalid_argument("amplitude vector has wrong length");
  return StateVector(num_qubits, std::move(amplitudes));
}

double StateVector::norm() const {
  double s = 0.0;
  for (const cdouble& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

cdouble inner(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("inner: qubit count mismatch");
  cdouble s{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amp(i)) * b.amp(i);
  return s;
}

void apply_pauli_inplace(StateVector& state, const PauliString& a) {
  check_match(state.num_qubits(), a);
  auto& amps = state.amplitudes();
  const std::uint64_t x = a.x_mask();
  if (x == 0) {
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] *= a.phase_for(i);
    return;
  }
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const std::size_t j = i ^ x;
    if (i >= j) continue;
    // (A psi)_i = phase(i^x) psi_{i^x}
    const cdouble vi = amps[i];
    amps[i] = a.phase_for(j) * amps[j];
    amps[j] = a.phase_for(i) * vi;
  }
}

StateVector apply_pauli(const StateVector& in, const PauliString& a) {
  StateVector out = in;
  apply_pauli_inplace(out, a);
  return out;
}

void apply_gate_inplace(StateVector& state, const PauliString& generator, double angle) {
  check_match(state.num_qubits(), generator);
  const cdouble c{std::cos(angle), 0.0};
  const cdouble is{0.0, std::sin(angle)};
  auto& amps = state.amplitudes();
  const std::uint64_t x = generator.x_mask();
  if (x == 0) {
    for (std::size_t i = 0; i < amps.size(); ++i)
      amps[i] *= c + is * generator.phase_for(i);
    return;
  }
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const std::size_t j = i ^ x;
    if (i >= j) continue;
    const cdouble vi = amps[i];
    const cdouble vj = amps[j];
    amps[i] = c * vi + is * generator.phase_for(j) * vj;
    amps[j] = c * vj + is * generator.phase_for(i) * vi;
  }
}

StateVector apply_gate(const StateVector& in, const PauliString& generator, double angle) {
  StateVector out = in;
  apply_gate_inplace(out, generator, angle);
  return out;
}

DensityMatrix::DensityMatrix(int num_qubits, std::vector<cdouble> data)
    : num_qubits_(num_qubits), dim_(std::size_t{1} << num_qubits), data_(std::move(data)) {}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
  check_density_qubits(psi.num_qubits());
  const std::size_t dim = psi.dim();
  std::vector<cdouble> data(dim * dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) data[r * dim + c] = psi.amp(r) * std::conj(psi.amp(c));
  return DensityMatrix(psi.num_qubits(), std::move(data));
}

DensityMatrix DensityMatrix::zero(int num_qubits) {
  check_density_qubits(num_qubits);
  const std::size_t dim = std::size_t{1} << num_qubits;
  return DensityMatrix(num_qubits, std::vector<cdouble>(dim * dim, cdouble{0.0, 0.0}));
}

double DensityMatrix::trace_real() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += data_[i * dim_ + i].real();
  return t;
}

double DensityMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = r; c < dim_; ++c)
      worst = std::max(worst, std::abs(data_[r * dim_ + c] - std::conj(data_[c * dim_ + r])));
  return worst;
}

namespace {

// rho -> U rho with U = cos(angle) + i sin(angle) A, columns are states.
void left_multiply_gate(DensityMatrix& rho, const PauliString& a, double angle) {
  const std::size_t dim = rho.dim();
  const cdouble c{std::cos(angle), 0.0};
  const cdouble is{0.0, std::sin(angle)};
  auto& d = rho.data();
  const std::uint64_t x = a.x_mask();
  if (x == 0) {
    for (std::size_t r = 0; r < dim; ++r) {
      const cdouble f = c + is * a.phase_for(r);
      for (std::size_t col = 0; col < dim; ++col) d[r * dim + col] *= f;
    }
    return;
  }
  for (std::size_t r = 0; r < dim; ++r) {
    const std::size_t r2 = r ^ x;
    if (r >= r2) continue;
    const cdouble ph_r = a.phase_for(r);
    const cdouble ph_r2 = a.phase_for(r2);
    for (std::size_t col = 0; col < dim; ++col) {
      const cdouble vr = d[r * dim + col];
      const cdouble vr2 = d[r2 * dim + col];
      d[r * dim + col] = c * vr + is * ph_r2 * vr2;
      d[r2 * dim + col] = c * vr2 + is * ph_r * vr;
    }
  }
}

// rho -> rho U^dag; U^dag = cos(angle) - i sin(angle) A acting on rows.
// (rho A)_{r,c} = rho_{r, c^x} phase(c).
void right_multiply_gate_dagger(DensityMatrix& rho, const PauliString& a, double angle) {
  const std::size_t dim = rho.dim();
  const cdouble c{std::cos(angle), 0.0};
  const cdouble mis{0.0, -std::sin(angle)};
  auto& d = rho.data();
  const std::uint64_t x = a.x_mask();
  if (x == 0) {
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t col = 0; col < dim; ++col)
        d[r * dim + col] *= c + mis * a.phase_for(col);
    return;
  }
  for (std::size_t r = 0; r < dim; ++r) {
    cdouble* row = d.data() + r * dim;
    for (std::size_t col = 0; col < dim; ++col) {
      const std::size_t col2 = col ^ x;
      if (col >= col2) continue;
      const cdouble v1 = row[col];
      const cdouble v2 = row[col2];
      row[col] = c * v1 + mis * a.phase_for(col) * v2;
      row[col2] = c * v2 + mis * a.phase_for(col2) * v1;
    }
  }
}

} // namespace

void apply_gate_inplace(DensityMatrix& rho, const PauliString& generator, double angle) {
  check_match(rho.num_qubits(), generator);
  left_multiply_gate(rho, generator, angle);
  right_multiply_gate_dagger(rho, generator, angle);
}

DensityMatrix apply_gate(const DensityMatrix& rho, const PauliString& generator, double angle) {
  DensityMatrix out = rho;
  apply_gate_inplace(out, generator, angle);
  return out;
}

void apply_noisy_gate_channel_inplace(DensityMatrix& rho, const PauliString& generator,
                                      double angle, double s) {
  check_match(rho.num_qubits(), generator);
  if (s < 0.0 || s > 0.5)
    throw std::invalid_argument("apply_noisy_gate_channel: s must lie in [0, 1/2]");
  if (s > 0.0) {
    // rho -> (1-s) rho + s A rho A^dag;
    // (A rho A^dag)_{r,c} = phase(r^x) rho_{r^x, c^x} conj(phase(c^x)).
    const std::size_t dim = rho.dim();
    auto& d = rho.data();
    const std::uint64_t x = generator.x_mask();
    std::vector<cdouble> mixed(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
      const cdouble ph_r = generator.phase_for(r ^ x);
      for (std::size_t col = 0; col < dim; ++col) {
        const cdouble ph_c = std::conj(generator.phase_for(col ^ x));
        mixed[r * dim + col] = ph_r * d[(r ^ x) * dim + (col ^ x)] * ph_c;
      }
    }
    for (std::size_t i = 0; i < dim * dim; ++i) d[i] = (1.0 - s) * d[i] + s * mixed[i];
  }
  apply_gate_inplace(rho, generator, angle);
}

DensityMatrix apply_noisy_gate_channel(const DensityMatrix& rho, const PauliString& generator,
                                       double angle, double s) {
  DensityMatrix out = rho;
  apply_noisy_gate_channel_inplace(out, generator, angle, s);
  return out;
}

} // namespace vqn
