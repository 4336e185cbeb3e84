#pragma once

#include <span>
#include <string>
#include <vector>

#include "vqn/circuit.hpp"
#include "vqn/hamiltonian.hpp"

namespace vqn {

enum class ParamTag { Theta, Gamma, Beta };

/// In decomposed mode every gate is independently perturbable; in layerwise
/// mode the parameter map marks all gates of a block as one noise-correlation
/// group. The gate list itself is identical in both modes.
enum class QaoaMode { Decomposed, Layerwise };

struct ParamLabel {
  ParamTag tag = ParamTag::Theta;
  int layer = 0; // 1-based layer/block index
};

struct ParamGroupEntry {
  int gate_index = 0;
  double coeff = 1.0;
};

/// How gates share logical parameters, plus the bookkeeping the noise and
/// time-accounting code needs: per-parameter labels and box ranges
/// (gamma in [0, 2pi), beta in [0, pi)), a per-gate layer id for correlated
/// noise groupings, and the identity constant dropped from decomposed cost
/// blocks (it re-enters energies through the full Hamiltonian).
struct ParamMap {
  int num_logical = 0;
  std::vector<std::vector<ParamGroupEntry>> groups; // one entry list per logical param
  std::vector<ParamLabel> labels;                   // one per logical param
  std::vector<std::pair<double, double>> boxes;     // [lo, hi) per logical param
  std::vector<int> gate_layer;                      // one per gate
  double identity_constant = 0.0;
  QaoaMode qaoa_mode = QaoaMode::Decomposed;

  bool is_qaoa() const;
  std::string label_string(int param) const; // e.g. "gamma_3"
  void validate(const Circuit& circuit) const;
};

struct AnsatzCircuit {
  Circuit circuit;
  ParamMap map;
};

/// Brick-wall ansatz over |0...0>: each of the p layers is two periodic brick
/// rows (pairs (0,1),(2,3),... then (1,2),(3,4),...,(n-1,0)); every brick is
/// one XX gate followed by Z and X rotations on each of its two qubits, so a
/// layer holds n bricks and the circuit has exactly q = 5np gates, each with
/// its own logical parameter. Requires even n.
AnsatzCircuit checkerboard(int n, int p);

/// p alternating cost/mixer blocks over |+>^n per the standard construction:
/// cost block k applies exp(-i gamma_k c_j P_j) for every non-identity term
/// (c_j, P_j) of H, mixer block k applies exp(-i beta_k X_j) on every qubit.
/// Identity terms are tracked in map.identity_constant. Requires diagonal H:
/// the per-term decomposition is exact only when all terms commute.
AnsatzCircuit qaoa_build(const Hamiltonian& h, int p, QaoaMode mode);

/// t_exec = sum_k (gamma_k + beta_k) with every angle first wrapped into its
/// box. Requires a QAOA parameter map.
double execution_time(const ParamMap& map, std::span<const double> params);

/// Wrap x into [0, period).
double wrap_angle(double x, double period);

} // namespace vqn
