// Batch experiment driver: optimizes variational circuits, sweeps stochastic
// gate noise, perturbs parameters one at a time, and scans the depth vs
// execution-time trade-off. Emits plot-ready CSV/JSON; progress goes to
// stderr, data to files.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vqn/analysis.hpp"
#include "vqn/ansatz.hpp"
#include "vqn/constants.hpp"
#include "vqn/hamiltonian.hpp"
#include "vqn/instances.hpp"
#include "vqn/io.hpp"
#include "vqn/noise.hpp"
#include "vqn/optimize.hpp"
#include "vqn/parallel.hpp"
#include "vqn/rng.hpp"
#include "vqn/spectrum.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vqn;

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int threads = hardware_threads();
  std::string out_dir = ".";
  std::optional<long> samples;
  std::optional<int> max_dm_qubits;
  bool gnuplot = false;
};

void add_common_flags(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config JSON")->required();
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--threads", args.threads, "worker threads (default: all cores)");
  cmd->add_option("--out", args.out_dir, "output directory (default: .)");
  cmd->add_option("--samples", args.samples, "override n_samples");
  cmd->add_option("--max-dm-qubits", args.max_dm_qubits, "density-matrix qubit cap");
  cmd->add_flag("--gnuplot-script", args.gnuplot, "also write a gnuplot script");
}

ExperimentConfig load_config(const CommonArgs& args) {
  ExperimentConfig config = read_config_file(args.config_path);
  if (args.seed) config.seed = *args.seed;
  if (args.samples) {
    config.n_samples = *args.samples;
    if (config.n_samples < 2) throw std::invalid_argument("--samples must be at least 2");
  }
  if (args.max_dm_qubits) limits::set_max_density_qubits(*args.max_dm_qubits);
  config.validate();
  return config;
}

fs::path out_path(const CommonArgs& args, const std::string& name) {
  fs::create_directories(args.out_dir);
  return fs::path(args.out_dir) / name;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

struct Instance {
  Hamiltonian hamiltonian;
  AnsatzCircuit ansatz;
};

int sat_clause_count(const ExperimentConfig& config) {
  if (config.clauses > 0) return config.clauses;
  return static_cast<int>(std::lround(4.2 * config.n));
}

Instance make_instance(const ExperimentConfig& config, int index) {
  const std::uint64_t sub = derive_seed(config.seed, 0x9057ULL, static_cast<std::uint64_t>(index));
  const QaoaMode mode = config.layerwise ? QaoaMode::Layerwise : QaoaMode::Decomposed;
  switch (config.problem) {
    case ProblemKind::Ising: {
      auto rng = make_rng(sub);
      Hamiltonian h = build_ising(config.n, uniform_in(rng, config.h_min, config.h_max));
      if (config.n % 2 != 0)
        throw std::invalid_argument("ising: the checkerboard ansatz requires even n");
      return {std::move(h), checkerboard(config.n, config.depth)};
    }
    case ProblemKind::Sat3: {
      Hamiltonian h =
          build_3sat(gen_3sat(config.n, sat_clause_count(config), config.unique_sat, sub));
      auto ansatz = qaoa_build(h, config.depth, mode);
      return {std::move(h), std::move(ansatz)};
    }
    case ProblemKind::MaxCut: {
      Hamiltonian h = build_maxcut(gen_maxcut(config.n, config.edge_prob, sub));
      auto ansatz = qaoa_build(h, config.depth, mode);
      return {std::move(h), std::move(ansatz)};
    }
    case ProblemKind::Search: {
      std::uint64_t target;
      if (config.target) {
        target = *config.target;
      } else {
        auto rng = make_rng(sub);
        target = rng() % (std::uint64_t{1} << config.n);
      }
      Hamiltonian h = build_search(config.n, target);
      auto ansatz = qaoa_build(h, config.depth, mode);
      return {std::move(h), std::move(ansatz)};
    }
  }
  throw std::logic_error("unreachable");
}

OptResult optimize_instance(const Instance& inst, const ExperimentConfig& config, int index,
                            int threads) {
  MinimizeOptions options;
  options.threads = threads;
  return minimize(inst.ansatz.circuit, inst.ansatz.map, inst.hamiltonian,
                  config.effective_restarts(),
                  derive_seed(config.seed, 0x0b7ULL, static_cast<std::uint64_t>(index)), options);
}

void write_gnuplot(const CommonArgs& args, const std::string& name,
                   const std::string& body) {
  if (!args.gnuplot) return;
  auto out = open_out(out_path(args, name));
  out << "# gnuplot script generated alongside the data files\n" << body;
  std::cerr << "wrote " << out_path(args, name).string() << "\n";
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

int run_optimize(const CommonArgs& args) {
  const ExperimentConfig config = load_config(args);
  const int count = config.instance_count;
  std::vector<json> rows(static_cast<std::size_t>(count));

  const int outer = std::min(args.threads, count);
  const int inner = count == 1 ? args.threads : 1;
  parallel_for(static_cast<std::size_t>(count), outer, [&](std::size_t i) {
    const Instance inst = make_instance(config, static_cast<int>(i));
    const OptResult r = optimize_instance(inst, config, static_cast<int>(i), inner);

    json row;
    row["instance"] = i;
    row["energy_star"] = r.energy_star;
    row["params_star"] = r.params_star;
    row["iterations"] = r.iterations;
    row["restarts"] = r.restarts_used;
    row["converged"] = r.converged;
    if (r.t_exec) row["t_exec"] = *r.t_exec;
    row["q"] = inst.ansatz.circuit.gate_count();

    // Exact spectral data needs a dense eigensolve for non-diagonal
    // Hamiltonians, which the density-matrix cap limits; past it the
    // optimization result still stands, just without bounds.
    try {
      const SpectralData spec = spectral_data(inst.hamiltonian);
      const StabilityBounds bounds = stability_bounds(r.energy_star, spec);
      const SigmaThreshold threshold =
          sigma_threshold(r.energy_star, spec, inst.ansatz.circuit.gate_count());
      row["E_g"] = spec.ground_energy;
      row["delta"] = spec.gap;
      row["E_m"] = spec.max_energy;
      row["bounds"] = {{"lower", bounds.lower},
                       {"upper", bounds.upper},
                       {"lower_clamped", bounds.clamped_lower()},
                       {"upper_clamped", bounds.clamped_upper()},
                       {"accepted", bounds.accepted}};
      row["overlap"] = ground_overlap(run_circuit(inst.ansatz.circuit, r.params_star), spec);
      row["sigma_threshold"] = threshold.unbounded ? json("inf") : json(threshold.sigma);
    } catch (const std::invalid_argument& e) {
      row["spectral_unavailable"] = e.what();
    }
    rows[i] = std::move(row);
  });

  json doc;
  doc["schema"] = 1;
  doc["problem"] = problem_name(config.problem);
  doc["n"] = config.n;
  doc["depth"] = config.depth;
  doc["seed"] = config.seed;
  doc["results"] = rows;

  const fs::path path = out_path(args, "optimize.json");
  open_out(path) << doc.dump(2) << "\n";
  std::cerr << "wrote " << path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sigma-sweep
// ---------------------------------------------------------------------------

int run_sigma_sweep(const CommonArgs& args) {
  const ExperimentConfig config = load_config(args);
  if (config.sigma_grid.empty())
    throw std::invalid_argument("sigma-sweep: config requires a non-empty \"sigma_grid\"");
  const int count = config.instance_count;
  const NoiseGrouping grouping =
      config.layerwise ? NoiseGrouping::PerLayer : NoiseGrouping::PerGate;

  std::vector<PerturbationReport> reports(static_cast<std::size_t>(count));
  const int outer = std::min(args.threads, count);
  const int inner = count == 1 ? args.threads : 1;
  parallel_for(static_cast<std::size_t>(count), outer, [&](std::size_t i) {
    const Instance inst = make_instance(config, static_cast<int>(i));
    const OptResult r = optimize_instance(inst, config, static_cast<int>(i), inner);
    reports[i] = sigma_sweep(inst.ansatz.circuit, inst.ansatz.map, r.params_star,
                             inst.hamiltonian, config.sigma_grid, config.n_samples,
                             derive_seed(config.seed, 0x51eebULL, i), grouping, inner);
    std::cerr << "instance " << i << ": E* = " << r.energy_star << ", q = "
              << inst.ansatz.circuit.gate_count() << "\n";
  });

  // Ensemble aggregation: mean of per-instance mean shifts, ensemble standard
  // error across instances (per-instance MC error for a single instance).
  const std::size_t points = config.sigma_grid.size();
  PerturbationReport agg;
  agg.sigma_grid = config.sigma_grid;
  agg.n_samples = config.n_samples;
  agg.num_qubits = config.n;
  double mean_q = 0.0;
  for (const auto& rep : reports) mean_q += static_cast<double>(rep.gate_count);
  mean_q /= count;
  agg.gate_count = static_cast<std::size_t>(std::lround(mean_q));
  for (std::size_t p = 0; p < points; ++p) {
    double mean = 0.0, exact = 0.0;
    bool exact_ok = true;
    for (const auto& rep : reports) {
      mean += rep.mean_de[p];
      exact_ok = exact_ok && std::isfinite(rep.exact_de[p]);
      exact += rep.exact_de[p];
    }
    mean /= count;
    agg.mean_de.push_back(mean);
    agg.exact_de.push_back(exact_ok ? exact / count
                                    : std::numeric_limits<double>::quiet_NaN());
    if (count > 1) {
      double var = 0.0;
      for (const auto& rep : reports) var += (rep.mean_de[p] - mean) * (rep.mean_de[p] - mean);
      agg.std_error.push_back(std::sqrt(var / (count - 1) / count));
    } else {
      agg.std_error.push_back(reports[0].std_error[p]);
    }
  }

  const fs::path path = out_path(args, "sigma_sweep.csv");
  {
    auto out = open_out(path);
    CsvWriter csv(out);
    csv.header({"sigma", "mean_dE", "stderr", "exact_dE", "q", "n"});
    for (std::size_t p = 0; p < points; ++p)
      csv.row({CsvWriter::cell(agg.sigma_grid[p]), CsvWriter::cell(agg.mean_de[p]),
               CsvWriter::cell(agg.std_error[p]), CsvWriter::cell(agg.exact_de[p]),
               CsvWriter::cell(static_cast<long long>(agg.gate_count)),
               CsvWriter::cell(static_cast<long long>(config.n))});
  }
  std::cerr << "wrote " << path.string() << "\n";

  // Quadratic fit over the validity window, when enough points exist.
  json fit_doc;
  fit_doc["schema"] = 1;
  fit_doc["q"] = agg.gate_count;
  try {
    agg.fit = fit_quadratic(agg);
    fit_doc["fit_c"] = agg.fit.coefficient;
    fit_doc["residual"] = agg.fit.residual;
    fit_doc["max_valid_sigma"] = agg.fit.max_valid_sigma;
    fit_doc["sigma_window"] = {agg.fit.sigma_lo, agg.fit.sigma_hi};
  } catch (const std::invalid_argument& e) {
    fit_doc["fit_error"] = e.what();
  }
  const fs::path fit_path = out_path(args, "sigma_sweep_fit.json");
  open_out(fit_path) << fit_doc.dump(2) << "\n";
  std::cerr << "wrote " << fit_path.string() << "\n";

  write_gnuplot(args, "sigma_sweep.gnuplot",
                "set logscale xy\n"
                "set xlabel 'sigma'\n"
                "set ylabel 'dE'\n"
                "plot 'sigma_sweep.csv' using 1:2:3 with yerrorbars title 'MC', \\\n"
                "     '' using 1:4 with lines title 'exact channel'\n");
  return 0;
}

// ---------------------------------------------------------------------------
// param-sweep
// ---------------------------------------------------------------------------

int run_param_sweep(const CommonArgs& args) {
  const ExperimentConfig config = load_config(args);
  std::vector<double> grid = config.delta_grid;
  if (grid.empty())
    for (int i = -10; i <= 10; ++i) grid.push_back(0.05 * i);

  const int count = config.instance_count;
  std::vector<ParamSweepTable> tables(static_cast<std::size_t>(count));
  const int outer = std::min(args.threads, count);
  const int inner = count == 1 ? args.threads : 1;
  parallel_for(static_cast<std::size_t>(count), outer, [&](std::size_t i) {
    const Instance inst = make_instance(config, static_cast<int>(i));
    const OptResult r = optimize_instance(inst, config, static_cast<int>(i), inner);
    tables[i] = per_parameter_sweep(inst.ansatz.circuit, inst.ansatz.map, r.params_star,
                                    inst.hamiltonian, grid, inner);
  });

  // Instance-averaged energies; the logical parameter layout is identical
  // across instances of one config.
  const ParamSweepTable& first = tables[0];
  const std::size_t num_params = first.labels.size();
  std::vector<std::vector<double>> energy(num_params,
                                          std::vector<double>(grid.size(), 0.0));
  double base = 0.0;
  for (const auto& t : tables) {
    base += t.base_energy;
    for (std::size_t k = 0; k < num_params; ++k)
      for (std::size_t d = 0; d < grid.size(); ++d) energy[k][d] += t.energy[k][d];
  }
  base /= count;
  for (auto& row : energy)
    for (double& e : row) e /= count;

  const fs::path path = out_path(args, "param_sweep.csv");
  {
    auto out = open_out(path);
    CsvWriter csv(out);
    csv.header({"param_label", "layer", "delta", "energy"});
    for (std::size_t k = 0; k < num_params; ++k)
      for (std::size_t d = 0; d < grid.size(); ++d)
        csv.row({first.labels[k], CsvWriter::cell(static_cast<long long>(first.layers[k])),
                 CsvWriter::cell(grid[d]), CsvWriter::cell(energy[k][d])});
  }
  std::cerr << "wrote " << path.string() << "\n";

  // Sensitivity ranking on the averaged energies.
  std::vector<double> sensitivity(num_params, 0.0);
  for (std::size_t k = 0; k < num_params; ++k)
    for (double e : energy[k])
      sensitivity[k] = std::max(sensitivity[k], std::abs(e - base));
  std::vector<std::size_t> order(num_params);
  for (std::size_t k = 0; k < num_params; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sensitivity[a] > sensitivity[b]; });

  const fs::path rank_path = out_path(args, "param_sweep_ranking.csv");
  {
    auto out = open_out(rank_path);
    CsvWriter csv(out);
    csv.header({"rank", "param_label", "layer", "max_abs_shift"});
    for (std::size_t r = 0; r < order.size(); ++r)
      csv.row({CsvWriter::cell(static_cast<long long>(r + 1)), first.labels[order[r]],
               CsvWriter::cell(static_cast<long long>(first.layers[order[r]])),
               CsvWriter::cell(sensitivity[order[r]])});
  }
  std::cerr << "wrote " << rank_path.string() << "\n";

  write_gnuplot(args, "param_sweep.gnuplot",
                "set xlabel 'delta'\n"
                "set ylabel 'energy'\n"
                "plot for [label in system(\"cut -d, -f1 param_sweep.csv | tail -n +2 | sort -u\")] \\\n"
                "  'param_sweep.csv' using 3:(strcol(1) eq label ? $4 : NaN) with lines title label\n");
  return 0;
}

// ---------------------------------------------------------------------------
// time-scan
// ---------------------------------------------------------------------------

int run_time_scan(const CommonArgs& args) {
  const ExperimentConfig config = load_config(args);
  if (config.depth_range.empty() || config.t_max_grid.empty())
    throw std::invalid_argument(
        "time-scan: config requires non-empty \"depth_range\" and \"t_max_grid\"");
  const Instance inst = make_instance(config, 0);

  ScanOptions options;
  options.restarts = config.effective_restarts();
  options.seed = derive_seed(config.seed, 0x7153ULL);
  options.minimize.threads = args.threads;
  options.mode = config.layerwise ? QaoaMode::Layerwise : QaoaMode::Decomposed;
  const ScanTable table =
      depth_time_scan(inst.hamiltonian, config.depth_range, config.t_max_grid, options);

  const fs::path path = out_path(args, "time_scan.csv");
  {
    auto out = open_out(path);
    CsvWriter csv(out);
    csv.header({"p", "t_max", "E_star", "t_exec", "overlap", "converged"});
    for (const auto& cell : table.cells)
      csv.row({CsvWriter::cell(static_cast<long long>(cell.depth)),
               CsvWriter::cell(cell.t_max), CsvWriter::cell(cell.e_star),
               CsvWriter::cell(cell.t_exec), CsvWriter::cell(cell.overlap),
               CsvWriter::cell(cell.converged)});
  }
  std::cerr << "wrote " << path.string() << "\n";

  const fs::path plateau_path = out_path(args, "time_scan_plateaus.csv");
  {
    auto out = open_out(plateau_path);
    CsvWriter csv(out);
    csv.header({"p", "plateau_index", "t_max_start", "t_max_end", "energy"});
    int index = 0, last_depth = -1;
    for (const auto& plateau : table.plateaus) {
      index = plateau.depth == last_depth ? index + 1 : 1;
      last_depth = plateau.depth;
      csv.row({CsvWriter::cell(static_cast<long long>(plateau.depth)),
               CsvWriter::cell(static_cast<long long>(index)),
               CsvWriter::cell(plateau.t_start), CsvWriter::cell(plateau.t_end),
               CsvWriter::cell(plateau.energy)});
    }
  }
  std::cerr << "wrote " << plateau_path.string() << "\n";

  write_gnuplot(args, "time_scan.gnuplot",
                "set xlabel 't_max'\n"
                "set ylabel 'p'\n"
                "set view map\n"
                "splot 'time_scan.csv' using 2:1:3 with points pt 5 ps 3 palette title 'E*'\n");
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic gate-noise analysis for variational quantum algorithms"};
  app.require_subcommand(1);

  CommonArgs optimize_args, sweep_args, param_args, scan_args;
  auto* cmd_optimize =
      app.add_subcommand("optimize", "optimize instances, report bounds and noise thresholds");
  add_common_flags(cmd_optimize, optimize_args);
  auto* cmd_sweep =
      app.add_subcommand("sigma-sweep", "energy shift vs noise spread, with quadratic fit");
  add_common_flags(cmd_sweep, sweep_args);
  auto* cmd_param =
      app.add_subcommand("param-sweep", "per-parameter perturbation table and ranking");
  add_common_flags(cmd_param, param_args);
  auto* cmd_scan =
      app.add_subcommand("time-scan", "E*(p, t_max) heatmap under execution-time budgets");
  add_common_flags(cmd_scan, scan_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_optimize->parsed()) return run_optimize(optimize_args);
    if (cmd_sweep->parsed()) return run_sigma_sweep(sweep_args);
    if (cmd_param->parsed()) return run_param_sweep(param_args);
    if (cmd_scan->parsed()) return run_time_scan(scan_args);
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
