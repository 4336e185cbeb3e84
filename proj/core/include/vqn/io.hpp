#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqn/ansatz.hpp"
#include "vqn/circuit.hpp"
#include "vqn/hamiltonian.hpp"
#include "vqn/instances.hpp"

namespace vqn {

/// Parse failure with the position that caused it.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line(line) {}
  explicit ParseError(const std::string& what) : std::runtime_error(what), line(0) {}
  int line;
};

// DIMACS CNF ("p cnf <vars> <clauses>", clauses terminated by 0).
CnfInstance read_dimacs(std::istream& in);
CnfInstance read_dimacs_file(const std::string& path);
void write_dimacs(std::ostream& out, const CnfInstance& instance);
void write_dimacs_file(const std::string& path, const CnfInstance& instance);

// Edge list: first line is the vertex count, then one "u v" pair per line,
// 0-indexed.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list_file(const std::string& path, const Graph& g);

// Experiment configs, versioned JSON with "schema": 1.
ExperimentConfig read_config_json(const std::string& text);
ExperimentConfig read_config_file(const std::string& path);
std::string write_config_json(const ExperimentConfig& config);

// Circuit snapshot (gate list with generator labels, param ids, coeffs) for
// reproducibility.
std::string circuit_to_json(const Circuit& circuit, const ParamMap& map);

/// Format a double with 17 significant digits (round-trip exact).
std::string format_full(double value);

/// Minimal CSV emitter: header row then rows of full-precision numbers or
/// verbatim strings.
class CsvWriter {
public:
  explicit CsvWriter(std::ostream& out);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& cells);
  static std::string cell(double value);      // full precision, "" for NaN
  static std::string cell(long long value);
  static std::string cell(bool value);

private:
  std::ostream& out_;
  std::size_t columns_ = 0;
};

} // namespace vqn
