// Command-line front end: generate planted instances, prune them, solve the
// extinction fixed point, enumerate small catalogs, decompose factor
// differences, build alternating cycles, and run seeded Monte Carlo sweeps.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pkf/branching.hpp"
#include "pkf/circuits.hpp"
#include "pkf/constructions.hpp"
#include "pkf/experiments.hpp"
#include "pkf/graph.hpp"
#include "pkf/model.hpp"
#include "pkf/oracle.hpp"
#include "pkf/pruning.hpp"
#include "pkf/rng.hpp"

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json circuit_to_json(const pkf::AlternatingCircuit& c) {
  json verts = json::array();
  for (const auto v : c.verts) verts.push_back(v);
  return verts;
}

int cmd_generate(const std::string& out, std::size_t n, int k, double lambda,
                 std::uint64_t seed, bool hamiltonian) {
  pkf::Rng rng(seed);
  pkf::PlantedInstance inst =
      hamiltonian ? pkf::plant_hamiltonian(n, lambda, rng)
                  : pkf::plant(pkf::ModelParams{n, k, lambda, seed}, rng);
  pkf::save_edge_list(out, inst.graph, hamiltonian ? 2 : k);
  std::cerr << "wrote " << out << " (" << inst.graph.edge_count() << " edges)\n";
  return 0;
}

int cmd_prune(const std::string& in, std::optional<int> k_override,
              const std::string& json_out, const std::string& core_out) {
  pkf::EdgeListFile file = pkf::load_edge_list(in);
  const int k = k_override.value_or(file.k);
  pkf::PruningOutcome outcome = pkf::iterative_prune(file.graph, k);

  json j;
  j["n"] = file.graph.vertex_count();
  j["k"] = k;
  j["edges"] = file.graph.edge_count();
  j["identified_planted"] = outcome.identified_planted.size();
  j["removed_unplanted"] = outcome.removed_unplanted.size();
  j["core_edges"] = outcome.core.edge_count();
  j["core_empty"] = outcome.core.edge_count() == 0;
  if (!file.graph.red().empty()) {
    j["core_planted_fraction"] =
        pkf::core_planted_fraction(outcome, file.graph.red()).to_double();
    j["pruning_error"] =
        pkf::risk(file.graph.red(), outcome.identified_planted).to_double();
  }
  j["fired_vertices"] = outcome.stats.fired_vertices;
  j["peak_queue"] = outcome.stats.peak_queue;

  if (json_out.empty() || json_out == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream os(json_out);
    os << j.dump(2) << '\n';
  }
  if (!core_out.empty()) pkf::save_edge_list(core_out, outcome.core, k);
  return 0;
}

int cmd_rho(double lambda, int k, double tol) {
  pkf::ExtinctionSolution sol = pkf::extinction_probability(lambda, k, tol);
  json j;
  j["lambda"] = lambda;
  j["k"] = k;
  j["rho"] = sol.rho;
  j["core_fraction_prediction"] = (1.0 - sol.rho) * (1.0 - sol.rho);
  j["iterations"] = sol.iterations;
  j["residual"] = sol.residual;
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_oracle_enumerate(const std::string& in, std::optional<int> k_override) {
  pkf::EdgeListFile file = pkf::load_edge_list(in);
  const int k = k_override.value_or(file.k);
  pkf::FactorCatalog catalog = pkf::enumerate_k_factors(file.graph, k);
  json j;
  j["n"] = catalog.n;
  j["k"] = catalog.k;
  j["catalog_size"] = catalog.size();
  if (!file.graph.red().empty() &&
      pkf::is_k_factor(file.graph.red(), catalog.n, k)) {
    const pkf::OverlapHistogram h = pkf::overlap_histogram(catalog, file.graph.red());
    json dist = json::object();
    for (std::size_t t = 0; t < h.by_distance.size(); ++t) {
      if (h.by_distance[t] > 0) dist[std::to_string(t)] = h.by_distance[t];
    }
    j["by_distance"] = dist;
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_circuits_decompose(const std::string& h_path, const std::string& hstar_path) {
  // Both inputs are edge-list files whose red sets carry the factors.
  pkf::EdgeListFile fh = pkf::load_edge_list(h_path);
  pkf::EdgeListFile fs = pkf::load_edge_list(hstar_path);
  const auto diff = pkf::color_difference(fh.graph.red(), fs.graph.red());
  const auto circuits = pkf::decompose(diff);
  json arr = json::array();
  for (const auto& c : circuits) arr.push_back(circuit_to_json(c));
  std::cout << arr.dump(2) << '\n';
  return 0;
}

int cmd_construct(const std::string& mode, std::size_t n, int k, double lambda,
                  std::size_t ell, std::size_t d, double gamma, std::uint64_t seed) {
  pkf::Rng rng(seed);
  pkf::PlantedInstance inst = pkf::plant(pkf::ModelParams{n, k, lambda, seed}, rng);
  json j;
  j["mode"] = mode;
  j["n"] = n;
  j["k"] = k;
  j["lambda"] = lambda;
  if (mode == "five-edge") {
    pkf::ConstructionParams params;
    params.ell = ell;
    params.d = d;
    params.gamma = gamma;
    pkf::ConstructedCycles out = pkf::construct_cycles(inst.graph, k, params, rng);
    j["reserved"] = out.reserved;
    j["attempted_trees"] = out.attempted_trees;
    j["kept_trees"] = out.kept_trees;
    j["admitted_trees"] = out.admitted_trees;
    j["link_edges"] = out.link_edges;
    j["cycles_found"] = out.cycles.size();
    json arr = json::array();
    for (const auto& c : out.cycles) arr.push_back(circuit_to_json(c));
    j["cycles"] = arr;
    j["all_valid"] = true;  // construct_cycles validates every emitted cycle
  } else if (mode == "three-edge") {
    const pkf::Edge e = inst.h_star.edges().front();
    pkf::ThreeEdgeResult out = pkf::three_edge_closure(inst.graph, k, e, ell, gamma, rng);
    j["edge"] = {e.u, e.v};
    j["reserved"] = out.reserved;
    j["left_grown"] = out.left_grown;
    j["right_grown"] = out.right_grown;
    j["closed"] = out.cycle.has_value();
    if (out.cycle) {
      j["cycle"] = circuit_to_json(*out.cycle);
      j["valid"] = true;  // validated inside three_edge_closure
    }
  } else {
    std::cerr << "unknown mode: " << mode << '\n';
    return 2;
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              std::optional<std::size_t> workers, const std::string& formats_csv) {
  pkf::SweepConfig cfg = pkf::SweepConfig::from_json_text(read_file(config_path));
  if (workers) cfg.workers = *workers;
  if (!formats_csv.empty()) {
    cfg.formats.clear();
    std::stringstream ss(formats_csv);
    std::string fmt;
    while (std::getline(ss, fmt, ',')) cfg.formats.push_back(fmt);
  }

  if (cfg.mode == pkf::SweepMode::Exact) {
    const auto rows = pkf::exact_recovery_rate(cfg);
    json arr = json::array();
    std::size_t failures = 0;
    for (const auto& r : rows) {
      failures += r.failures;
      arr.push_back({{"n", r.point.n},
                     {"k", r.point.k},
                     {"lambda", r.point.lambda},
                     {"trials", r.trials},
                     {"failures", r.failures},
                     {"empty_core_rate", r.empty_core_rate},
                     {"oracle_checked", r.oracle_checked},
                     {"unique_factor_rate", r.unique_factor_rate},
                     {"implication_violations", r.implication_violations}});
    }
    std::cout << arr.dump(2) << '\n';
    return failures == 0 ? 0 : 1;
  }
  if (cfg.mode == pkf::SweepMode::PosteriorToy) {
    const auto rows = pkf::posterior_toy_sweep(cfg);
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"n", r.point.n},
                     {"k", r.point.k},
                     {"lambda", r.point.lambda},
                     {"t", r.distance_t},
                     {"mass", r.mass}});
    }
    std::cout << arr.dump(2) << '\n';
    return 0;
  }

  pkf::SweepResult result = pkf::run_sweep(cfg);
  pkf::emit_outputs(result, out_dir, cfg.formats);
  std::size_t failures = 0;
  for (const auto& r : result.rows) failures += r.failures;
  std::cerr << "sweep: " << result.rows.size() << " grid points, " << failures
            << " failed trials, outputs in " << out_dir << '\n';
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planted k-factor laboratory"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "sample a planted instance to an edge-list file");
  std::string gen_out = "instance.edges";
  std::size_t gen_n = 1000;
  int gen_k = 1;
  double gen_lambda = 1.0;
  std::uint64_t gen_seed = 1;
  bool gen_ham = false;
  gen->add_option("--out", gen_out);
  gen->add_option("--n", gen_n)->required();
  gen->add_option("--k", gen_k);
  gen->add_option("--lambda", gen_lambda)->required();
  gen->add_option("--seed", gen_seed);
  gen->add_flag("--hamiltonian", gen_ham, "plant a Hamiltonian cycle (k = 2)");

  // prune
  auto* prune = app.add_subcommand("prune", "run iterative pruning on an edge-list file");
  std::string prune_in, prune_json = "-", prune_core;
  int prune_k = -1;
  prune->add_option("--in", prune_in)->required();
  prune->add_option("--k", prune_k, "override the k recorded in the file header");
  prune->add_option("--json", prune_json, "summary output path, '-' for stdout");
  prune->add_option("--core", prune_core, "write the residual core as an edge list");

  // rho
  auto* rho = app.add_subcommand("rho", "solve the extinction fixed point");
  double rho_lambda = 0.0, rho_tol = 1e-12;
  int rho_k = 1;
  rho->add_option("--lambda", rho_lambda)->required();
  rho->add_option("--k", rho_k)->required();
  rho->add_option("--tol", rho_tol);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact small-instance ground truth");
  auto* oracle_enum = oracle->add_subcommand("enumerate", "catalog size and distance histogram");
  std::string oracle_in;
  int oracle_k = -1;
  oracle_enum->add_option("--in", oracle_in)->required();
  oracle_enum->add_option("--k", oracle_k);

  // circuits
  auto* circuits = app.add_subcommand("circuits", "alternating-circuit algebra");
  auto* circ_dec = circuits->add_subcommand("decompose", "decompose H delta H* into circuits");
  std::string circ_h, circ_hstar;
  circ_dec->add_option("--h", circ_h)->required();
  circ_dec->add_option("--hstar", circ_hstar)->required();

  // construct
  auto* construct = app.add_subcommand("construct", "alternating-cycle constructions");
  std::string cons_mode = "three-edge";
  std::size_t cons_n = 10000, cons_ell = 8, cons_d = 3;
  int cons_k = 1;
  double cons_lambda = 1.5, cons_gamma = 0.03;
  std::uint64_t cons_seed = 1;
  construct->add_option("--mode", cons_mode)->check(CLI::IsMember({"five-edge", "three-edge"}));
  construct->add_option("--n", cons_n)->required();
  construct->add_option("--k", cons_k);
  construct->add_option("--lambda", cons_lambda)->required();
  construct->add_option("--ell", cons_ell);
  construct->add_option("--d", cons_d);
  construct->add_option("--gamma", cons_gamma);
  construct->add_option("--seed", cons_seed);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "seeded Monte Carlo sweep from a JSON config");
  std::string sweep_config, sweep_out = "out", sweep_formats;
  std::size_t sweep_workers = 0;
  bool sweep_workers_set = false;
  sweep->add_option("--config", sweep_config)->required();
  sweep->add_option("--out", sweep_out);
  sweep->add_option("--workers", sweep_workers)->each([&](const std::string&) {
    sweep_workers_set = true;
  });
  sweep->add_option("--format", sweep_formats, "comma-separated: csv,json,svg");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_generate(gen_out, gen_n, gen_k, gen_lambda, gen_seed, gen_ham);
    }
    if (prune->parsed()) {
      return cmd_prune(prune_in, prune_k >= 0 ? std::optional<int>(prune_k) : std::nullopt,
                       prune_json, prune_core);
    }
    if (rho->parsed()) return cmd_rho(rho_lambda, rho_k, rho_tol);
    if (oracle->parsed() && oracle_enum->parsed()) {
      return cmd_oracle_enumerate(oracle_in,
                                  oracle_k >= 0 ? std::optional<int>(oracle_k) : std::nullopt);
    }
    if (circuits->parsed() && circ_dec->parsed()) {
      return cmd_circuits_decompose(circ_h, circ_hstar);
    }
    if (construct->parsed()) {
      return cmd_construct(cons_mode, cons_n, cons_k, cons_lambda, cons_ell, cons_d,
                           cons_gamma, cons_seed);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_config, sweep_out,
                       sweep_workers_set ? std::optional<std::size_t>(sweep_workers)
                                         : std::nullopt,
                       sweep_formats);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  std::cerr << "no subcommand executed\n";
  return 2;
}
