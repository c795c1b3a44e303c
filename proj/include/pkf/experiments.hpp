#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pkf/graph.hpp"
#include "pkf/oracle.hpp"

namespace pkf {

enum class SweepMode { CoreFraction, Recovery, Exact, PosteriorToy };

SweepMode sweep_mode_from_string(const std::string& s);
std::string to_string(SweepMode m);

struct GridPoint {
  std::size_t n{0};
  int k{1};
  double lambda{0.0};

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct SweepConfig {
  std::vector<GridPoint> grid;
  std::size_t trials{1};
  std::uint64_t master_seed{0};
  std::size_t workers{0};  // 0: PKF_WORKERS env var, else hardware count
  SweepMode mode{SweepMode::CoreFraction};
  std::vector<std::string> formats{"csv"};
  std::size_t oracle_cap{14};  // Exact mode cross-checks the catalog when n <= cap

  void validate() const;
  static SweepConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
};

// One Monte Carlo trial. The derived seed makes the record a pure function of
// (config, grid index, trial index); wall time is diagnostic only and never
// enters emitted tables.
struct TrialRecord {
  std::size_t grid_index{0};
  std::size_t trial_index{0};
  std::uint64_t seed{0};
  bool failed{false};
  std::string error;
  double core_fraction{0.0};
  double prune_error{0.0};
  double degree_error{0.0};
  bool core_empty{false};
  double wall_seconds{0.0};
};

struct PointAggregate {
  GridPoint point;
  std::size_t trials{0};
  std::size_t failures{0};
  double mean_core_fraction{0.0}, stderr_core_fraction{0.0};
  double mean_prune_error{0.0}, stderr_prune_error{0.0};
  double mean_degree_error{0.0}, stderr_degree_error{0.0};
  double empty_core_rate{0.0};
  double theory_core_fraction{0.0};  // same code path as the rho solver
};

struct SweepResult {
  std::vector<PointAggregate> rows;
  std::vector<TrialRecord> trials;  // index = grid_index * config.trials + trial_index
};

// Runs trials across a worker pool; failed trials become explicit failure
// records excluded from aggregates. Output depends only on (config, seed).
SweepResult run_sweep(const SweepConfig& config);

struct ExactRecoveryRow {
  GridPoint point;
  std::size_t trials{0};
  std::size_t failures{0};
  double empty_core_rate{0.0};
  bool oracle_checked{false};
  double unique_factor_rate{0.0};
  // Trials where the core was empty but pruning missed part of H*; the model
  // guarantees zero.
  std::size_t implication_violations{0};
};

std::vector<ExactRecoveryRow> exact_recovery_rate(const SweepConfig& config);

struct PosteriorToyRow {
  GridPoint point;
  std::size_t distance_t{0};
  double mass{0.0};  // averaged posterior mass at |H delta H*| = 2t
};

std::vector<PosteriorToyRow> posterior_toy_sweep(const SweepConfig& config);

// Fixed column order, 12-significant-digit decimals, '\n' line ends; reruns
// with any worker count are byte-identical.
void emit_csv(std::ostream& os, const SweepResult& result);
SweepResult parse_csv(std::istream& is);

void emit_json(std::ostream& os, const SweepResult& result);

// Hand-rolled line plot: per k, one polyline per metric over lambda plus
// error bars on the empirical series.
void emit_svg(std::ostream& os, const SweepResult& result);

// Writes sweep.csv / sweep.json / sweep.svg into out_dir according to
// formats; throws std::invalid_argument on an empty table.
void emit_outputs(const SweepResult& result, const std::string& out_dir,
                  const std::vector<std::string>& formats);

std::string format_sig(double x);  // 12 significant digits

}  // namespace pkf
