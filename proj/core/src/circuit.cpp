#include "vqn/circuit.hpp"

#include <stdexcept>

namespace vqn {

StateVector Circuit::make_initial_state() const {
  return initial_state == InitialState::AllZero ? StateVector::all_zero(num_qubits)
                                                : StateVector::all_plus(num_qubits);
}

void Circuit::validate() const {
  for (const Gate& g : gates) {
    if (g.generator.num_qubits() != num_qubits)
      throw std::invalid_argument("Circuit: gate generator qubit count mismatch");
    if (g.param_id < 0 || g.param_id >= num_params)
      throw std::invalid_argument("Circuit: gate param_id out of range");
    if (g.coeff == 0.0) throw std::invalid_argument("Circuit: gate coeff must be non-zero");
  }
}

StateVector run_circuit(const Circuit& circuit, std::span<const double> params) {
  if (params.size() != static_cast<std::size_t>(circuit.num_params))
    throw std::invalid_argument("run_circuit: parameter vector length mismatch");
  StateVector psi = circuit.make_initial_state();
  for (const Gate& g : circuit.gates) apply_gate_inplace(psi, g.generator, g.angle(params));
  return psi;
}

StateVector run_circuit_with_offsets(const Circuit& circuit, std::span<const double> params,
                                     std::span<const double> angle_offsets) {
  if (params.size() != static_cast<std::size_t>(circuit.num_params))
    throw std::invalid_argument("run_circuit: parameter vector length mismatch");
  if (angle_offsets.size() != circuit.gates.size())
    throw std::invalid_argument("run_circuit: offset vector length mismatch");
  StateVector psi = circuit.make_initial_state();
  for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
    const Gate& g = circuit.gates[k];
    apply_gate_inplace(psi, g.generator, g.angle(params) + angle_offsets[k]);
  }
  return psi;
}

} // namespace vqn
