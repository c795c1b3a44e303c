#include "pkf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "pkf/branching.hpp"
#include "pkf/model.hpp"
#include "pkf/pruning.hpp"
#include "pkf/rng.hpp"

namespace pkf {

using nlohmann::json;

SweepMode sweep_mode_from_string(const std::string& s) {
  if (s == "core_fraction") return SweepMode::CoreFraction;
  if (s == "recovery") return SweepMode::Recovery;
  if (s == "exact") return SweepMode::Exact;
  if (s == "posterior_toy") return SweepMode::PosteriorToy;
  throw std::invalid_argument("unknown sweep mode: " + s);
}

std::string to_string(SweepMode m) {
  switch (m) {
    case SweepMode::CoreFraction: return "core_fraction";
    case SweepMode::Recovery: return "recovery";
    case SweepMode::Exact: return "exact";
    case SweepMode::PosteriorToy: return "posterior_toy";
  }
  return "?";
}

void SweepConfig::validate() const {
  if (grid.empty()) throw std::invalid_argument("sweep config: empty grid");
  if (trials < 1) throw std::invalid_argument("sweep config: trials must be >= 1");
  for (const GridPoint& p : grid) {
    ModelParams mp{p.n, p.k, p.lambda, 0};
    mp.validate();
  }
}

SweepConfig SweepConfig::from_json_text(const std::string& text) {
  const json j = json::parse(text);
  SweepConfig cfg;
  for (const auto& item : j.at("grid")) {
    GridPoint p;
    p.n = item.at("n").get<std::size_t>();
    p.k = item.at("k").get<int>();
    p.lambda = item.at("lambda").get<double>();
    cfg.grid.push_back(p);
  }
  cfg.trials = j.at("trials").get<std::size_t>();
  cfg.master_seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("workers")) cfg.workers = j.at("workers").get<std::size_t>();
  if (j.contains("mode")) cfg.mode = sweep_mode_from_string(j.at("mode").get<std::string>());
  if (j.contains("formats")) cfg.formats = j.at("formats").get<std::vector<std::string>>();
  if (j.contains("oracle_cap")) cfg.oracle_cap = j.at("oracle_cap").get<std::size_t>();
  cfg.validate();
  return cfg;
}

std::string SweepConfig::to_json_text() const {
  json j;
  j["grid"] = json::array();
  for (const GridPoint& p : grid) {
    j["grid"].push_back({{"n", p.n}, {"k", p.k}, {"lambda", p.lambda}});
  }
  j["trials"] = trials;
  j["seed"] = master_seed;
  j["workers"] = workers;
  j["mode"] = to_string(mode);
  j["formats"] = formats;
  j["oracle_cap"] = oracle_cap;
  return j.dump(2);
}

namespace {

std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PKF_WORKERS")) {
    const long w = std::atol(env);
    if (w > 0) return static_cast<std::size_t>(w);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Work-stealing over flattened (grid point, trial) pairs; record slots are
// preallocated so the result layout never depends on scheduling.
template <typename Fn>
void parallel_for_trials(std::size_t total, std::size_t workers, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      fn(i);
    }
  };
  const std::size_t count = std::min(workers, total == 0 ? std::size_t{1} : total);
  if (count <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

TrialRecord run_one_trial(const SweepConfig& cfg, std::size_t gi, std::size_t ti) {
  TrialRecord rec;
  rec.grid_index = gi;
  rec.trial_index = ti;
  rec.seed = derive_seed(cfg.master_seed, gi, ti);
  const GridPoint& p = cfg.grid[gi];
  const auto start = std::chrono::steady_clock::now();
  try {
    Rng rng(rec.seed);
    ModelParams params{p.n, p.k, p.lambda, rec.seed};
    PlantedInstance inst = plant(params, rng);
    PruningOutcome outcome = iterative_prune(inst.graph, p.k);
    rec.core_fraction = core_planted_fraction(outcome, inst.h_star).to_double();
    rec.prune_error = risk(inst.h_star, outcome.identified_planted).to_double();
    rec.degree_error = risk(inst.h_star, degree_estimator(inst.graph, p.k)).to_double();
    rec.core_empty = outcome.core.edge_count() == 0;
  } catch (const std::exception& ex) {
    rec.failed = true;
    rec.error = ex.what();
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

struct MeanStderr {
  double mean{0.0};
  double se{0.0};
};

MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (const double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (const double x : xs) ss += (x - out.mean) * (x - out.mean);
  const double var = ss / static_cast<double>(xs.size() - 1);  // unbiased
  out.se = std::sqrt(var / static_cast<double>(xs.size()));
  return out;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const std::size_t total = cfg.grid.size() * cfg.trials;
  SweepResult result;
  result.trials.resize(total);
  const std::size_t workers = resolve_workers(cfg.workers);

  parallel_for_trials(total, workers, [&](std::size_t i) {
    const std::size_t gi = i / cfg.trials;
    const std::size_t ti = i % cfg.trials;
    result.trials[i] = run_one_trial(cfg, gi, ti);
  });

  for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
    PointAggregate agg;
    agg.point = cfg.grid[gi];
    agg.trials = cfg.trials;
    std::vector<double> core, prune, degree;
    std::size_t empty_cores = 0, ok = 0;
    for (std::size_t ti = 0; ti < cfg.trials; ++ti) {
      const TrialRecord& rec = result.trials[gi * cfg.trials + ti];
      if (rec.failed) {
        ++agg.failures;
        continue;
      }
      ++ok;
      core.push_back(rec.core_fraction);
      prune.push_back(rec.prune_error);
      degree.push_back(rec.degree_error);
      if (rec.core_empty) ++empty_cores;
    }
    const MeanStderr c = mean_stderr(core), pr = mean_stderr(prune), de = mean_stderr(degree);
    agg.mean_core_fraction = c.mean;
    agg.stderr_core_fraction = c.se;
    agg.mean_prune_error = pr.mean;
    agg.stderr_prune_error = pr.se;
    agg.mean_degree_error = de.mean;
    agg.stderr_degree_error = de.se;
    agg.empty_core_rate = ok > 0 ? static_cast<double>(empty_cores) / static_cast<double>(ok) : 0.0;
    agg.theory_core_fraction = core_fraction_prediction(agg.point.lambda, agg.point.k);
    result.rows.push_back(agg);
  }
  return result;
}

std::vector<ExactRecoveryRow> exact_recovery_rate(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<ExactRecoveryRow> rows;
  for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
    const GridPoint& p = cfg.grid[gi];
    ExactRecoveryRow row;
    row.point = p;
    row.trials = cfg.trials;
    row.oracle_checked = p.n <= cfg.oracle_cap;
    std::size_t empty_cores = 0, unique = 0, ok = 0;
    for (std::size_t ti = 0; ti < cfg.trials; ++ti) {
      const std::uint64_t seed = derive_seed(cfg.master_seed, gi, ti);
      try {
        Rng rng(seed);
        ModelParams params{p.n, p.k, p.lambda, seed};
        PlantedInstance inst = plant(params, rng);
        PruningOutcome outcome = iterative_prune(inst.graph, p.k);
        ++ok;
        const bool empty_core = outcome.core.edge_count() == 0;
        if (empty_core) {
          ++empty_cores;
          if (!(outcome.identified_planted == inst.h_star)) ++row.implication_violations;
        }
        if (row.oracle_checked) {
          const FactorCatalog catalog = enumerate_k_factors(inst.graph, p.k);
          const bool is_unique = catalog.size() == 1;
          if (is_unique) ++unique;
          if (empty_core && !is_unique) ++row.implication_violations;
        }
      } catch (const std::exception&) {
        ++row.failures;
      }
    }
    row.empty_core_rate = ok > 0 ? static_cast<double>(empty_cores) / static_cast<double>(ok) : 0.0;
    row.unique_factor_rate = ok > 0 ? static_cast<double>(unique) / static_cast<double>(ok) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<PosteriorToyRow> posterior_toy_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<PosteriorToyRow> rows;
  for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
    const GridPoint& p = cfg.grid[gi];
    if (p.n > cfg.oracle_cap) {
      throw ResourceError("posterior_toy_sweep: n exceeds the oracle cap");
    }
    const std::size_t half = p.n * static_cast<std::size_t>(p.k) / 2;
    std::vector<double> mass(half + 1, 0.0);
    std::size_t ok = 0;
    for (std::size_t ti = 0; ti < cfg.trials; ++ti) {
      const std::uint64_t seed = derive_seed(cfg.master_seed, gi, ti);
      try {
        Rng rng(seed);
        ModelParams params{p.n, p.k, p.lambda, seed};
        PlantedInstance inst = plant(params, rng);
        const FactorCatalog catalog = enumerate_k_factors(inst.graph, p.k);
        const OverlapHistogram hist = overlap_histogram(catalog, inst.h_star);
        ++ok;
        for (std::size_t t = 0; t <= half; ++t) {
          mass[t] += static_cast<double>(hist.by_distance[t]) /
                     static_cast<double>(hist.total);
        }
      } catch (const std::exception&) {
        // failed trials are excluded from the average
      }
    }
    for (std::size_t t = 0; t <= half; ++t) {
      PosteriorToyRow row;
      row.point = p;
      row.distance_t = t;
      row.mass = ok > 0 ? mass[t] / static_cast<double>(ok) : 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_sig(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

namespace {

constexpr const char* kCsvHeader =
    "n,k,lambda,trials,failures,mean_core_fraction,stderr_core_fraction,"
    "mean_prune_error,stderr_prune_error,mean_degree_error,stderr_degree_error,"
    "empty_core_rate,theory_core_fraction";

}  // namespace

void emit_csv(std::ostream& os, const SweepResult& result) {
  os << kCsvHeader << '\n';
  for (const PointAggregate& r : result.rows) {
    os << r.point.n << ',' << r.point.k << ',' << format_sig(r.point.lambda) << ','
       << r.trials << ',' << r.failures << ',' << format_sig(r.mean_core_fraction)
       << ',' << format_sig(r.stderr_core_fraction) << ','
       << format_sig(r.mean_prune_error) << ',' << format_sig(r.stderr_prune_error)
       << ',' << format_sig(r.mean_degree_error) << ','
       << format_sig(r.stderr_degree_error) << ',' << format_sig(r.empty_core_rate)
       << ',' << format_sig(r.theory_core_fraction) << '\n';
  }
}

SweepResult parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw std::runtime_error("sweep csv: unexpected header");
  }
  SweepResult result;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 13) throw std::runtime_error("sweep csv: bad row: " + line);
    PointAggregate r;
    r.point.n = std::stoull(cells[0]);
    r.point.k = std::stoi(cells[1]);
    r.point.lambda = std::stod(cells[2]);
    r.trials = std::stoull(cells[3]);
    r.failures = std::stoull(cells[4]);
    r.mean_core_fraction = std::stod(cells[5]);
    r.stderr_core_fraction = std::stod(cells[6]);
    r.mean_prune_error = std::stod(cells[7]);
    r.stderr_prune_error = std::stod(cells[8]);
    r.mean_degree_error = std::stod(cells[9]);
    r.stderr_degree_error = std::stod(cells[10]);
    r.empty_core_rate = std::stod(cells[11]);
    r.theory_core_fraction = std::stod(cells[12]);
    result.rows.push_back(r);
  }
  return result;
}

void emit_json(std::ostream& os, const SweepResult& result) {
  json rows = json::array();
  for (const PointAggregate& r : result.rows) {
    rows.push_back({{"n", r.point.n},
                    {"k", r.point.k},
                    {"lambda", r.point.lambda},
                    {"trials", r.trials},
                    {"failures", r.failures},
                    {"mean_core_fraction", r.mean_core_fraction},
                    {"stderr_core_fraction", r.stderr_core_fraction},
                    {"mean_prune_error", r.mean_prune_error},
                    {"stderr_prune_error", r.stderr_prune_error},
                    {"mean_degree_error", r.mean_degree_error},
                    {"stderr_degree_error", r.stderr_degree_error},
                    {"empty_core_rate", r.empty_core_rate},
                    {"theory_core_fraction", r.theory_core_fraction}});
  }
  os << rows.dump(2) << '\n';
}

namespace {

struct Series {
  std::string name;
  std::string color;
  std::vector<std::pair<double, double>> points;  // (lambda, value)
  std::vector<double> bars;                       // stderr per point, may be empty
};

}  // namespace

void emit_svg(std::ostream& os, const SweepResult& result) {
  if (result.rows.empty()) throw std::invalid_argument("emit_svg: empty table");

  std::vector<int> ks;
  for (const PointAggregate& r : result.rows) {
    if (std::find(ks.begin(), ks.end(), r.point.k) == ks.end()) ks.push_back(r.point.k);
  }
  std::sort(ks.begin(), ks.end());

  std::vector<Series> series;
  const char* palette[4] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad"};
  for (const int k : ks) {
    Series core{"core_fraction_k" + std::to_string(k), palette[0], {}, {}};
    Series theory{"theory_k" + std::to_string(k), palette[1], {}, {}};
    Series prune{"prune_error_k" + std::to_string(k), palette[2], {}, {}};
    Series degree{"degree_error_k" + std::to_string(k), palette[3], {}, {}};
    for (const PointAggregate& r : result.rows) {
      if (r.point.k != k) continue;
      core.points.emplace_back(r.point.lambda, r.mean_core_fraction);
      core.bars.push_back(r.stderr_core_fraction);
      theory.points.emplace_back(r.point.lambda, r.theory_core_fraction);
      prune.points.emplace_back(r.point.lambda, r.mean_prune_error);
      prune.bars.push_back(r.stderr_prune_error);
      degree.points.emplace_back(r.point.lambda, r.mean_degree_error);
      degree.bars.push_back(r.stderr_degree_error);
    }
    series.push_back(std::move(core));
    series.push_back(std::move(theory));
    series.push_back(std::move(prune));
    series.push_back(std::move(degree));
  }

  double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = 1.0;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;

  const double W = 720, H = 480, L = 70, R = 20, T = 20, B = 50;
  auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
     << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\""
     << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
     << "\" text-anchor=\"middle\" font-size=\"14\">lambda</text>\n";

  int label_row = 0;
  for (const Series& s : series) {
    if (s.points.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : s.points) os << sx(x) << ',' << sy(y) << ' ';
    os << "\"/>\n";
    for (std::size_t i = 0; i < s.bars.size(); ++i) {
      if (s.bars[i] <= 0.0) continue;
      const double x = sx(s.points[i].first);
      const double y0 = sy(s.points[i].second - s.bars[i]);
      const double y1 = sy(s.points[i].second + s.bars[i]);
      os << "<line x1=\"" << x << "\" y1=\"" << y0 << "\" x2=\"" << x << "\" y2=\"" << y1
         << "\" stroke=\"" << s.color << "\"/>\n";
    }
    os << "<text x=\"" << W - R - 200 << "\" y=\"" << T + 16 + 16 * label_row
       << "\" font-size=\"12\" fill=\"" << s.color << "\">" << s.name << "</text>\n";
    ++label_row;
  }
  os << "</svg>\n";
}

void emit_outputs(const SweepResult& result, const std::string& out_dir,
                  const std::vector<std::string>& formats) {
  if (result.rows.empty()) throw std::invalid_argument("emit_outputs: empty table");
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto open = [&](const std::string& name) {
    std::ofstream os(fs::path(out_dir) / name, std::ios::binary);
    if (!os) throw std::runtime_error("emit_outputs: cannot write " + name);
    return os;
  };
  for (const std::string& fmt : formats) {
    if (fmt == "csv") {
      auto os = open("sweep.csv");
      emit_csv(os, result);
    } else if (fmt == "json") {
      auto os = open("sweep.json");
      emit_json(os, result);
    } else if (fmt == "svg") {
      auto os = open("sweep.svg");
      emit_svg(os, result);
    } else {
      throw std::invalid_argument("emit_outputs: unknown format " + fmt);
    }
  }
}

}  // namespace pkf
