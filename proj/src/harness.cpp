#include "pbit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "pbit/csv.hpp"
#include "pbit/errors.hpp"
#include "pbit/rng.hpp"

namespace pbit {

std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view graph_name,
                          std::uint64_t c_index, std::uint64_t replicate) {
  std::uint64_t name_hash = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : graph_name) {
    name_hash ^= ch;
    name_hash *= 0x100000001b3ULL;
  }
  std::uint64_t s = splitmix64(master_seed);
  s = hash_combine(s, name_hash);
  s = hash_combine(s, c_index);
  s = hash_combine(s, replicate);
  return s;
}

Graph load_graph(const GraphSource& source) {
  if (const auto* path = std::get_if<std::string>(&source)) {
    return load_gset_file(*path);
  }
  const auto& toy = std::get<ToySource>(source);
  return generate_toy(toy.kind, toy.seed);
}

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw DataError("grid step must be positive");
  if (stop < start) throw DataError("grid stop must be >= start");
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double v = start + k * step;
    if (v > stop + step * 0.5) break;
    grid.push_back(v);
  }
  return grid;
}

std::vector<double> default_c_grid() { return make_grid(1.0, 5.0, 0.05); }

double resolve_i0(const SweepConfig& cfg, const CouplingMatrix& coupl) {
  if (cfg.i0_mode == I0Mode::explicit_value) {
    if (!(cfg.i0_value > 0.0)) throw DataError("explicit i0 must be positive");
    return cfg.i0_value;
  }
  return coupl.i0_endpoints().second;  // throws on s_J = 0
}

namespace {

void validate_sweep_config(const SweepConfig& cfg) {
  if (cfg.c_grid.empty()) throw DataError("c grid is empty");
  if (!(cfg.c_grid.front() >= 1.0)) throw DataError("c grid must start at >= 1");
  for (std::size_t i = 1; i < cfg.c_grid.size(); ++i) {
    if (!(cfg.c_grid[i] > cfg.c_grid[i - 1])) {
      throw DataError("c grid must be strictly increasing");
    }
  }
  if (cfg.ticks < 1) throw DataError("sweep needs ticks >= 1");
  if (cfg.seeds < 1) throw DataError("sweep needs >= 1 seed");
}

}  // namespace

std::vector<SweepRow> run_sweep(const Graph& g, const CouplingMatrix& coupl,
                                const SweepConfig& cfg) {
  validate_sweep_config(cfg);
  const double i0 = resolve_i0(cfg, coupl);
  const int burn_energy = cfg.burn_in_energy >= 0 ? cfg.burn_in_energy : cfg.ticks / 2;

  const std::size_t n_tasks = cfg.c_grid.size() * static_cast<std::size_t>(cfg.seeds);
  std::vector<SweepRow> rows(n_tasks);

  auto run_task = [&](std::size_t task) {
    const std::size_t c_index = task / static_cast<std::size_t>(cfg.seeds);
    const std::size_t replicate = task % static_cast<std::size_t>(cfg.seeds);
    const double c = cfg.c_grid[c_index];

    SimParams params;
    params.i0 = i0;
    params.c = c;
    params.ticks = cfg.ticks;
    params.seed = derive_seed(cfg.master_seed, g.name, c_index, replicate);

    const Trajectory traj = run(coupl, params);
    const ObservableReport report = make_report(traj, g, cfg.burn_in_c1, burn_energy);

    rows[task] = SweepRow{g.name,    c,          params.seed,    i0,
                          report.c1, report.final_energy, report.cut, 0.0,
                          report.second_diff_norm, report.oscillatory};
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1 || n_tasks <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t workers = std::min(static_cast<std::size_t>(jobs), n_tasks);
    pool.reserve(workers);
    for (std::size_t wi = 0; wi < workers; ++wi) {
      pool.emplace_back([&] {
        for (std::size_t t = next.fetch_add(1); t < n_tasks; t = next.fetch_add(1)) {
          run_task(t);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // normalized cut uses the best cut observed across the whole sweep
  double max_cut = 0.0;
  for (const SweepRow& r : rows) max_cut = std::max(max_cut, r.cut);
  if (max_cut > 0.0) {
    for (SweepRow& r : rows) r.cut_normalized = r.cut / max_cut;
  }
  return rows;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  const Graph g = load_graph(cfg.source);
  const CouplingMatrix coupl = build_couplings(g);
  return run_sweep(g, coupl, cfg);
}

ComparisonRow compare(const Graph& g, const CouplingMatrix& coupl, const SweepConfig& cfg,
                      const TheoryParams& theory) {
  const double i0 = resolve_i0(cfg, coupl);
  const std::vector<SweepRow> rows = run_sweep(g, coupl, cfg);

  std::vector<C1Sample> samples;
  samples.reserve(rows.size());
  for (const SweepRow& r : rows) samples.push_back({r.c, r.seed, r.c1});
  const ThresholdEstimate sim = detect_sim_threshold(samples);

  TheoryParams at_i0 = theory;
  at_i0.i0 = i0;
  const double c_non = critical_c(coupl, at_i0, BoundaryVariant::non_ipr);
  const double c_ipr = critical_c(coupl, at_i0, BoundaryVariant::ipr_corrected);

  return ComparisonRow{g.name, i0, sim.c_star, c_non, c_ipr};
}

ComparisonRow compare(const SweepConfig& cfg, const TheoryParams& theory) {
  const Graph g = load_graph(cfg.source);
  const CouplingMatrix coupl = build_couplings(g);
  return compare(g, coupl, cfg, theory);
}

SensitivityReport sensitivity_report(const CouplingMatrix& coupl, double i0,
                                     std::span<const double> r_values,
                                     const TheoryParams& params) {
  if (r_values.empty()) throw DataError("sensitivity_report: no R values");
  for (double r : r_values) {
    if (!(r > 1.0)) throw DataError("sensitivity_report: R values must be > 1");
  }

  SensitivityReport report;
  report.rows.reserve(r_values.size());
  for (double r : r_values) {
    TheoryParams p = params;
    p.i0 = i0;
    p.threshold_R = r;
    report.rows.push_back({r, critical_c(coupl, p, BoundaryVariant::non_ipr),
                           critical_c(coupl, p, BoundaryVariant::ipr_corrected)});
  }

  // c* should be non-increasing in R (larger required amplification)
  std::vector<SensitivityRow> sorted = report.rows;
  std::sort(sorted.begin(), sorted.end(),
            [](const SensitivityRow& a, const SensitivityRow& b) { return a.threshold_R < b.threshold_R; });
  report.monotone_ok = true;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].c_star_non_ipr > sorted[i - 1].c_star_non_ipr + 1e-9 ||
        sorted[i].c_star_ipr > sorted[i - 1].c_star_ipr + 1e-9) {
      report.monotone_ok = false;
    }
  }
  return report;
}

void write_sweep_csv(const std::string& path, std::span<const SweepRow> rows) {
  const std::vector<std::string> header = {"graph", "c",   "seed",           "i0",
                                           "c1",    "final_energy", "cut",  "cut_normalized",
                                           "second_diff", "oscillatory"};
  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  for (const SweepRow& r : rows) {
    cells.push_back({r.graph, format_double(r.c), std::to_string(r.seed), format_double(r.i0),
                     format_double(r.c1), format_double(r.final_energy), format_double(r.cut),
                     format_double(r.cut_normalized), format_double(r.second_diff),
                     r.oscillatory ? "1" : "0"});
  }
  emit_csv(path, header, cells);
}

void write_comparison_csv(const std::string& path, std::span<const ComparisonRow> rows) {
  const std::vector<std::string> header = {"graph", "i0_max", "c_star_sim", "c_star_non_ipr",
                                           "c_star_ipr"};
  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  for (const ComparisonRow& r : rows) {
    cells.push_back({r.graph, format_double(r.i0_max_sim),
                     r.c_star_sim ? format_double(*r.c_star_sim) : "unresolved",
                     format_double(r.c_star_non_ipr), format_double(r.c_star_ipr)});
  }
  emit_csv(path, header, cells);
}

void write_boundary_csv(const std::string& path, std::span<const BoundaryCurve> curves) {
  const std::vector<std::string> header = {"i0",  "c_star", "variant",
                                           "lambda_osc", "ipr", "alpha_eff"};
  std::vector<std::vector<std::string>> cells;
  for (const BoundaryCurve& curve : curves) {
    const std::string variant{to_string(curve.variant)};
    for (const BoundaryPoint& pt : curve.points) {
      cells.push_back({format_double(pt.i0), format_double(pt.c_star), variant,
                       format_double(pt.lambda_osc), format_double(pt.ipr),
                       format_double(pt.alpha)});
    }
  }
  emit_csv(path, header, cells);
}

void write_sensitivity_csv(const std::string& path, const SensitivityReport& report) {
  const std::vector<std::string> header = {"R", "c_star_non_ipr", "c_star_ipr"};
  std::vector<std::vector<std::string>> cells;
  cells.reserve(report.rows.size());
  for (const SensitivityRow& r : report.rows) {
    cells.push_back({format_double(r.threshold_R), format_double(r.c_star_non_ipr),
                     format_double(r.c_star_ipr)});
  }
  emit_csv(path, header, cells);
}

}  // namespace pbit
