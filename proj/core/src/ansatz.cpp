#include "vqn/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vqn {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

bool ParamMap::is_qaoa() const {
  return num_logical > 0 &&
         std::all_of(labels.begin(), labels.end(), [](const ParamLabel& l) {
           return l.tag == ParamTag::Gamma || l.tag == ParamTag::Beta;
         });
}

std::string ParamMap::label_string(int param) const {
  const ParamLabel& l = labels[static_cast<std::size_t>(param)];
  const char* base = l.tag == ParamTag::Gamma ? "gamma" : l.tag == ParamTag::Beta ? "beta" : "theta";
  return std::string(base) + "_" + std::to_string(l.layer);
}

void ParamMap::validate(const Circuit& circuit) const {
  if (num_logical != circuit.num_params)
    throw std::invalid_argument("ParamMap: logical parameter count mismatch");
  if (labels.size() != static_cast<std::size_t>(num_logical) ||
      groups.size() != static_cast<std::size_t>(num_logical) ||
      boxes.size() != static_cast<std::size_t>(num_logical))
    throw std::invalid_argument("ParamMap: per-parameter vectors have wrong length");
  if (gate_layer.size() != circuit.gates.size())
    throw std::invalid_argument("ParamMap: gate_layer length mismatch");
  std::vector<int> seen(circuit.gates.size(), 0);
  for (int p = 0; p < num_logical; ++p) {
    for (const ParamGroupEntry& e : groups[static_cast<std::size_t>(p)]) {
      if (e.gate_index < 0 || static_cast<std::size_t>(e.gate_index) >= circuit.gates.size())
        throw std::invalid_argument("ParamMap: gate index out of range");
      if (circuit.gates[static_cast<std::size_t>(e.gate_index)].param_id != p)
        throw std::invalid_argument("ParamMap: group disagrees with gate param_id");
      ++seen[static_cast<std::size_t>(e.gate_index)];
    }
  }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; }))
    throw std::invalid_argument("ParamMap: every gate must appear in exactly one group");
}

AnsatzCircuit checkerboard(int n, int p) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("checkerboard: n must be even and >= 2");
  if (p < 1) throw std::invalid_argument("checkerboard: depth must be >= 1");

  Circuit circuit;
  circuit.num_qubits = n;
  circuit.initial_state = InitialState::AllZero;
  ParamMap map;

  auto add_gate = [&](const PauliString& generator, int layer) {
    const int param = static_cast<int>(circuit.gates.size());
    circuit.gates.push_back({generator, param, 1.0, 0.0});
    map.groups.push_back({{param, 1.0}});
    map.labels.push_back({ParamTag::Theta, layer + 1});
    map.boxes.emplace_back(0.0, kTwoPi);
    map.gate_layer.push_back(layer);
  };

  auto add_brick = [&](int a, int b, int layer) {
    add_gate(PauliString(n, {{a, PauliOp::X}, {b, PauliOp::X}}), layer);
    add_gate(PauliString::single(n, a, PauliOp::Z), layer);
    add_gate(PauliString::single(n, a, PauliOp::X), layer);
    add_gate(PauliString::single(n, b, PauliOp::Z), layer);
    add_gate(PauliString::single(n, b, PauliOp::X), layer);
  };

  for (int layer = 0; layer < p; ++layer) {
    for (int a = 0; a + 1 < n; a += 2) add_brick(a, a + 1, layer);       // even-aligned row
    for (int a = 1; a < n; a += 2) add_brick(a, (a + 1) % n, layer);     // odd-aligned row
  }

  circuit.num_params = static_cast<int>(circuit.gates.size());
  map.num_logical = circuit.num_params;
  circuit.validate();
  map.validate(circuit);
  return {std::move(circuit), std::move(map)};
}

AnsatzCircuit qaoa_build(const Hamiltonian& h, int p, QaoaMode mode) {
  if (p < 1) throw std::invalid_argument("qaoa_build: depth must be >= 1");
  if (!h.terms_all_diagonal())
    throw std::invalid_argument(
        "qaoa_build: cost Hamiltonian must be diagonal (per-term gates only commute then)");

  const int n = h.num_qubits();
  Circuit circuit;
  circuit.num_qubits = n;
  circuit.initial_state = InitialState::AllPlus;
  circuit.num_params = 2 * p;

  ParamMap map;
  map.num_logical = 2 * p;
  map.groups.resize(static_cast<std::size_t>(2 * p));
  map.qaoa_mode = mode;
  map.identity_constant = h.identity_constant();
  for (int k = 0; k < p; ++k) {
    map.labels.push_back({ParamTag::Gamma, k + 1});
    map.boxes.emplace_back(0.0, kTwoPi);
    map.labels.push_back({ParamTag::Beta, k + 1});
    map.boxes.emplace_back(0.0, std::numbers::pi);
  }

  for (int k = 0; k < p; ++k) {
    const int gamma_id = 2 * k;
    const int beta_id = 2 * k + 1;
    for (const PauliTerm& t : h.terms()) {
      if (t.pauli.is_identity()) continue; // global phase, tracked as a constant
      const double coeff = -t.coeff * t.pauli.sign();
      const int gate = static_cast<int>(circuit.gates.size());
      PauliString generator = t.pauli.sign() == 1
                                  ? t.pauli
                                  : PauliString::from_label(t.pauli.label());
      circuit.gates.push_back({std::move(generator), gamma_id, coeff, 0.0});
      map.groups[static_cast<std::size_t>(gamma_id)].push_back({gate, coeff});
      map.gate_layer.push_back(gamma_id);
    }
    for (int q = 0; q < n; ++q) {
      const int gate = static_cast<int>(circuit.gates.size());
      circuit.gates.push_back({PauliString::single(n, q, PauliOp::X), beta_id, -1.0, 0.0});
      map.groups[static_cast<std::size_t>(beta_id)].push_back({gate, -1.0});
      map.gate_layer.push_back(beta_id);
    }
  }

  circuit.validate();
  map.validate(circuit);
  return {std::move(circuit), std::move(map)};
}

double wrap_angle(double x, double period) {
  double w = x - period * std::floor(x / period);
  if (w >= period) w -= period; // guards the x = -eps rounding case
  return w;
}

double execution_time(const ParamMap& map, std::span<const double> params) {
  if (!map.is_qaoa())
    throw std::invalid_argument("execution_time: requires a QAOA parameter map");
  if (params.size() != static_cast<std::size_t>(map.num_logical))
    throw std::invalid_argument("execution_time: parameter vector length mismatch");
  double total = 0.0;
  for (int k = 0; k < map.num_logical; ++k) {
    const auto& box = map.boxes[static_cast<std::size_t>(k)];
    total += wrap_angle(params[static_cast<std::size_t>(k)], box.second - box.first);
  }
  return total;
}

} // namespace vqn
