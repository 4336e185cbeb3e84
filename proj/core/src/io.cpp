#include "vqn/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vqn {

using nlohmann::json;

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

} // namespace

CnfInstance read_dimacs(std::istream& in) {
  CnfInstance instance;
  int declared_clauses = -1;
  bool have_header = false;
  std::string line;
  int line_no = 0;
  std::vector<int> pending;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
    std::istringstream is(line);
    if (!have_header) {
      std::string p, fmt;
      if (!(is >> p) || p != "p")
        throw ParseError("expected DIMACS header \"p cnf <vars> <clauses>\"", line_no);
      if (!(is >> fmt) || fmt != "cnf") throw ParseError("unsupported DIMACS format", line_no);
      if (!(is >> instance.num_vars >> declared_clauses) || instance.num_vars < 1 ||
          declared_clauses < 0)
        throw ParseError("malformed DIMACS header", line_no);
      have_header = true;
      continue;
    }
    int lit;
    while (is >> lit) {
      if (lit == 0) {
        if (pending.size() != 3)
          throw ParseError("clause must have exactly 3 literals", line_no);
        instance.clauses.push_back({{pending[0], pending[1], pending[2]}});
        pending.clear();
      } else {
        pending.push_back(lit);
      }
    }
    if (!is.eof()) throw ParseError("unparseable literal", line_no);
  }
  if (!have_header) throw ParseError("missing DIMACS header", line_no);
  if (!pending.empty()) throw ParseError("clause missing its 0 terminator", line_no);
  if (declared_clauses >= 0 &&
      instance.clauses.size() != static_cast<std::size_t>(declared_clauses))
    throw ParseError("clause count disagrees with header", line_no);
  try {
    instance.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), line_no);
  }
  return instance;
}

CnfInstance read_dimacs_file(const std::string& path) {
  auto in = open_input(path);
  return read_dimacs(in);
}

void write_dimacs(std::ostream& out, const CnfInstance& instance) {
  out << "p cnf " << instance.num_vars << " " << instance.clauses.size() << "\n";
  for (const CnfClause& c : instance.clauses)
    out << c.literals[0] << " " << c.literals[1] << " " << c.literals[2] << " 0\n";
}

void write_dimacs_file(const std::string& path, const CnfInstance& instance) {
  auto out = open_output(path);
  write_dimacs(out, instance);
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  int line_no = 0;
  int num_vertices = -1;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    if (num_vertices < 0) {
      if (!(is >> num_vertices) || num_vertices < 1)
        throw ParseError("expected a positive vertex count", line_no);
      continue;
    }
    int u, v;
    if (!(is >> u >> v)) throw ParseError("expected an edge \"u v\"", line_no);
    if (u < 0 || v < 0 || u >= num_vertices || v >= num_vertices)
      throw ParseError("vertex index out of range", line_no);
    if (u == v) throw ParseError("self-loops are not allowed", line_no);
    edges.emplace_back(u, v);
  }
  if (num_vertices < 0) throw ParseError("empty edge-list file", line_no);
  try {
    // Normalization catches duplicates expressed in either orientation.
    for (auto& [u, v] : edges)
      if (u > v) std::swap(u, v);
    Graph g{num_vertices, edges};
    g.validate();
    return g;
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), line_no);
  }
}

Graph read_edge_list_file(const std::string& path) {
  auto in = open_input(path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.num_vertices << "\n";
  for (const auto& [u, v] : g.edges) out << u << " " << v << "\n";
}

void write_edge_list_file(const std::string& path, const Graph& g) {
  auto out = open_output(path);
  write_edge_list(out, g);
}

// ---------------------------------------------------------------------------
// Experiment configs
// ---------------------------------------------------------------------------

ExperimentConfig read_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config root must be a JSON object");
  if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"].get<int>() != 1)
    throw ParseError("config requires \"schema\": 1");

  ExperimentConfig c;
  try {
    c.problem = problem_from_name(j.at("problem").get<std::string>());
    c.n = j.at("n").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("depth")) c.depth = j["depth"].get<int>();
    if (j.contains("instance_count")) c.instance_count = j["instance_count"].get<int>();
    if (j.contains("sigma_grid")) c.sigma_grid = j["sigma_grid"].get<std::vector<double>>();
    if (j.contains("n_samples")) c.n_samples = j["n_samples"].get<long>();
    if (j.contains("mode")) {
      const std::string mode = j["mode"].get<std::string>();
      if (mode == "layerwise")
        c.layerwise = true;
      else if (mode == "decomposed")
        c.layerwise = false;
      else
        throw ParseError("config: \"mode\" must be \"decomposed\" or \"layerwise\"");
    }
    if (j.contains("t_max")) c.t_max = j["t_max"].get<double>();
    if (j.contains("h_min")) c.h_min = j["h_min"].get<double>();
    if (j.contains("h_max")) c.h_max = j["h_max"].get<double>();
    if (j.contains("clauses")) c.clauses = j["clauses"].get<int>();
    if (j.contains("unique")) c.unique_sat = j["unique"].get<bool>();
    if (j.contains("edge_prob")) c.edge_prob = j["edge_prob"].get<double>();
    if (j.contains("target")) c.target = j["target"].get<std::uint64_t>();
    if (j.contains("restarts")) c.restarts = j["restarts"].get<int>();
    if (j.contains("delta_grid")) c.delta_grid = j["delta_grid"].get<std::vector<double>>();
    if (j.contains("depth_range")) c.depth_range = j["depth_range"].get<std::vector<int>>();
    if (j.contains("t_max_grid")) c.t_max_grid = j["t_max_grid"].get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("config field error: ") + e.what());
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return c;
}

ExperimentConfig read_config_file(const std::string& path) {
  auto in = open_input(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_config_json(buffer.str());
}

std::string write_config_json(const ExperimentConfig& c) {
  json j;
  j["schema"] = 1;
  j["problem"] = problem_name(c.problem);
  j["n"] = c.n;
  j["depth"] = c.depth;
  j["instance_count"] = c.instance_count;
  j["sigma_grid"] = c.sigma_grid;
  j["n_samples"] = c.n_samples;
  j["seed"] = c.seed;
  j["mode"] = c.layerwise ? "layerwise" : "decomposed";
  if (c.t_max) j["t_max"] = *c.t_max;
  switch (c.problem) {
    case ProblemKind::Ising:
      j["h_min"] = c.h_min;
      j["h_max"] = c.h_max;
      break;
    case ProblemKind::Sat3:
      j["clauses"] = c.clauses;
      j["unique"] = c.unique_sat;
      break;
    case ProblemKind::MaxCut:
      j["edge_prob"] = c.edge_prob;
      break;
    case ProblemKind::Search:
      if (c.target) j["target"] = *c.target;
      break;
  }
  if (c.restarts) j["restarts"] = *c.restarts;
  if (!c.delta_grid.empty()) j["delta_grid"] = c.delta_grid;
  if (!c.depth_range.empty()) j["depth_range"] = c.depth_range;
  if (!c.t_max_grid.empty()) j["t_max_grid"] = c.t_max_grid;
  return j.dump(2) + "\n";
}

std::string circuit_to_json(const Circuit& circuit, const ParamMap& map) {
  json j;
  j["schema"] = 1;
  j["n"] = circuit.num_qubits;
  j["num_params"] = circuit.num_params;
  j["initial_state"] = circuit.initial_state == InitialState::AllZero ? "all-zero" : "all-plus";
  j["identity_constant"] = map.identity_constant;
  json gates = json::array();
  for (std::size_t k = 0; k < circuit.gates.size(); ++k) {
    const Gate& g = circuit.gates[k];
    gates.push_back({{"generator", g.generator.label()},
                     {"sign", g.generator.sign()},
                     {"param_id", g.param_id},
                     {"coeff", g.coeff},
                     {"fixed_offset", g.fixed_offset},
                     {"layer", map.gate_layer[k]}});
  }
  j["gates"] = std::move(gates);
  json labels = json::array();
  for (int p = 0; p < map.num_logical; ++p) labels.push_back(map.label_string(p));
  j["param_labels"] = std::move(labels);
  return j.dump(2) + "\n";
}

std::string format_full(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

CsvWriter::CsvWriter(std::ostream& out) : out_(out) {}

void CsvWriter::header(const std::vector<std::string>& names) {
  columns_ = names.size();
  for (std::size_t i = 0; i < names.size(); ++i)
    out_ << names[i] << (i + 1 < names.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (columns_ != 0 && cells.size() != columns_)
    throw std::logic_error("CsvWriter: row width disagrees with header");
  for (std::size_t i = 0; i < cells.size(); ++i)
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

std::string CsvWriter::cell(double value) {
  if (std::isnan(value)) return "";
  return format_full(value);
}

std::string CsvWriter::cell(long long value) { return std::to_string(value); }

std::string CsvWriter::cell(bool value) { return value ? "1" : "0"; }

} // namespace vqn
