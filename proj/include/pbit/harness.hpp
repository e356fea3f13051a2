#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pbit/coupling.hpp"
#include "pbit/graph.hpp"
#include "pbit/observables.hpp"
#include "pbit/theory.hpp"

namespace pbit {

struct ToySource {
  ToyKind kind;
  std::uint64_t seed = 0;
};

// A graph file path or a generated toy instance.
using GraphSource = std::variant<std::string, ToySource>;

Graph load_graph(const GraphSource& source);

enum class I0Mode { i0_max, explicit_value };

struct SweepConfig {
  GraphSource source;
  std::vector<double> c_grid;      // default 1.0 to 5.0 step 0.05
  I0Mode i0_mode = I0Mode::i0_max;
  double i0_value = 0.0;           // used when i0_mode == explicit_value
  int ticks = 40;
  int seeds = 5;
  std::uint64_t master_seed = 0;
  int burn_in_c1 = 0;
  int burn_in_energy = -1;         // -1 means ticks / 2
  int jobs = 1;
};

std::vector<double> make_grid(double start, double stop, double step);
std::vector<double> default_c_grid();  // 1.0:5.0:0.05, 81 values

struct SweepRow {
  std::string graph;
  double c;
  std::uint64_t seed;
  double i0;
  double c1;
  double final_energy;
  double cut;
  double cut_normalized;  // cut / max cut observed in this sweep
  double second_diff;
  bool oscillatory;
};

// One simulation per (c, replicate); replicate seeds derive from
// (master_seed, graph name, c index, replicate). Rows come back in
// deterministic (c, replicate) order regardless of the worker count.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);
std::vector<SweepRow> run_sweep(const Graph& g, const CouplingMatrix& coupl,
                                const SweepConfig& cfg);

double resolve_i0(const SweepConfig& cfg, const CouplingMatrix& coupl);

struct ComparisonRow {
  std::string graph;
  double i0_max_sim;
  std::optional<double> c_star_sim;  // empty: unresolved on the swept grid
  double c_star_non_ipr;
  double c_star_ipr;
};

// Runs the sweep, extracts the simulation threshold, and evaluates both
// theory variants at the same i0.
ComparisonRow compare(const SweepConfig& cfg, const TheoryParams& theory);
ComparisonRow compare(const Graph& g, const CouplingMatrix& coupl,
                      const SweepConfig& cfg, const TheoryParams& theory);

struct SensitivityRow {
  double threshold_R;
  double c_star_non_ipr;
  double c_star_ipr;
};

struct SensitivityReport {
  std::vector<SensitivityRow> rows;
  bool monotone_ok;  // c* non-increasing in R for both variants
};

SensitivityReport sensitivity_report(const CouplingMatrix& coupl, double i0,
                                     std::span<const double> r_values,
                                     const TheoryParams& params);

// CSV writers for the documented schemas.
void write_sweep_csv(const std::string& path, std::span<const SweepRow> rows);
void write_comparison_csv(const std::string& path,
                          std::span<const ComparisonRow> rows);
void write_boundary_csv(const std::string& path,
                        std::span<const BoundaryCurve> curves);
void write_sensitivity_csv(const std::string& path, const SensitivityReport& report);

}  // namespace pbit
