#pragma once

#include <span>
#include <vector>

#include "vqn/pauli.hpp"
#include "vqn/state.hpp"

namespace vqn {

/// One gate exp(i * generator * angle) with
/// angle = coeff * params[param_id] + fixed_offset.
struct Gate {
  PauliString generator;
  int param_id = 0;
  double coeff = 1.0; // radians per unit parameter, must be non-zero
  double fixed_offset = 0.0;

  double angle(std::span<const double> params) const {
    return coeff * params[static_cast<std::size_t>(param_id)] + fixed_offset;
  }
};

enum class InitialState { AllZero, AllPlus };

/// Ordered gate list over a logical parameter vector. Several gates may share
/// one logical parameter (QAOA blocks do).
struct Circuit {
  int num_qubits = 0;
  std::vector<Gate> gates;
  int num_params = 0;
  InitialState initial_state = InitialState::AllZero;

  std::size_t gate_count() const { return gates.size(); }
  StateVector make_initial_state() const;

  /// Throws std::invalid_argument on malformed circuits (bad param ids,
  /// zero coeffs, generator size mismatch).
  void validate() const;
};

StateVector run_circuit(const Circuit& circuit, std::span<const double> params);

/// Same as run_circuit but gate k is applied at angle(params) + angle_offsets[k].
/// This is the primitive behind noise sampling and shifted-gate evaluations.
StateVector run_circuit_with_offsets(const Circuit& circuit, std::span<const double> params,
                                     std::span<const double> angle_offsets);

} // namespace vqn
