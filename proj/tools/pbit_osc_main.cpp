// pbit-osc: simulate tick-random p-bit annealing on Ising graphs, detect
// period-2 oscillations, and predict the critical partial-synchrony
// threshold c*(I0) from linearized mean-field theory.
//
// Exit codes: 0 success, 1 usage error, 2 input-data error, 3 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbit/csv.hpp"
#include "pbit/dynamics.hpp"
#include "pbit/errors.hpp"
#include "pbit/harness.hpp"
#include "pbit/theory.hpp"

namespace {

using namespace pbit;

// post-parse usage problems (missing/conflicting options); exit code 1
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct GraphArgs {
  std::vector<std::string> paths;
  std::vector<int> toys;
  std::uint64_t toy_seed = 0;
};

void add_graph_options(CLI::App* cmd, GraphArgs& args, bool allow_many) {
  auto* graph = cmd->add_option("--graph", args.paths, "G-set format graph file");
  auto* toy = cmd->add_option("--toy", args.toys, "toy instance kind (1-7)")
                  ->check(CLI::Range(1, 7));
  cmd->add_option("--toy-seed", args.toy_seed, "seed for the ER toy instances (6, 7)");
  if (!allow_many) {
    graph->expected(0, 1);
    toy->expected(0, 1);
  }
}

std::vector<GraphSource> resolve_sources(const GraphArgs& args) {
  std::vector<GraphSource> sources;
  for (const std::string& p : args.paths) sources.emplace_back(p);
  for (int t : args.toys) {
    sources.emplace_back(ToySource{static_cast<ToyKind>(t), args.toy_seed});
  }
  if (sources.empty()) {
    throw UsageError("specify a graph file (--graph) or a toy kind (--toy)");
  }
  return sources;
}

struct GridArg {
  double start = 1.0, stop = 5.0, step = 0.05;
  bool set = false;
};

void add_grid_option(CLI::App* cmd, GridArg& grid, const std::string& name,
                     const std::string& help) {
  cmd->add_option_function<std::string>(
      name,
      [&grid, name](const std::string& text) {
        double a = 0, b = 0, s = 0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &b, &s) != 3) {
          throw CLI::ValidationError(name, "expected A:B:STEP");
        }
        grid = {a, b, s, true};
      },
      help + " as A:B:STEP");
}

struct I0Args {
  double value = 0.0;
  bool use_max = false;
  bool explicit_set = false;
};

void add_i0_options(CLI::App* cmd, I0Args& args, bool default_max) {
  auto* v = cmd->add_option_function<double>(
      "--i0", [&args](double x) { args.value = x; args.explicit_set = true; },
      "inverse-temperature gain I0");
  auto* m = cmd->add_flag("--i0-max", args.use_max,
                          default_max ? "use I0max = 10/s_J (default)" : "use I0max = 10/s_J");
  v->excludes(m);
}

void apply_i0(const I0Args& args, SweepConfig& cfg) {
  if (args.explicit_set) {
    cfg.i0_mode = I0Mode::explicit_value;
    cfg.i0_value = args.value;
  } else {
    cfg.i0_mode = I0Mode::i0_max;
  }
}

BoundaryVariant parse_variant(const std::string& v) {
  if (v == "non-ipr" || v == "non_ipr") return BoundaryVariant::non_ipr;
  if (v == "ipr" || v == "ipr_corrected") return BoundaryVariant::ipr_corrected;
  throw UsageError("--variant: expected non-ipr or ipr");
}

void print_graph_summary(const Graph& g, const CouplingMatrix& coupl) {
  std::cout << "graph " << g.name << ": " << g.n_nodes << " nodes, " << g.edges.size()
            << " edges, weights " << to_string(g.weight_type) << "\n";
  std::cout << "  s_J = " << format_double(coupl.s_j)
            << ", sigma_h^2 = " << format_double(coupl.sigma_h_sq);
  if (coupl.s_j > 0.0) {
    std::cout << ", I0 range [" << format_double(coupl.i0_min) << ", "
              << format_double(coupl.i0_max) << "]";
  }
  std::cout << "\n";
}

int run_cli(int argc, char** argv) {
  CLI::App app{"tick-random p-bit oscillation simulator and finite-time stability theory"};
  app.require_subcommand(1);
  // key = value config file; keys live in a [subcommand] section (or use
  // dotted keys like sweep.ticks); command-line flags win on conflict
  app.set_config("--config", "", "read options from an INI-style key=value file");

  // ---- parse ----------------------------------------------------------
  auto* cmd_parse = app.add_subcommand("parse", "validate and summarize a graph instance");
  GraphArgs parse_graphs;
  std::string parse_out;
  add_graph_options(cmd_parse, parse_graphs, true);
  cmd_parse->add_option("--out", parse_out, "re-serialize the instance to this path");


  // ---- simulate -------------------------------------------------------
  auto* cmd_sim = app.add_subcommand("simulate", "single run with trajectory export");
  GraphArgs sim_graphs;
  I0Args sim_i0;
  double sim_c = 1.0;
  int sim_ticks = 40;
  std::uint64_t sim_seed = 0;
  std::string sim_out, sim_dump;
  bool sim_start_plus = false;
  add_graph_options(cmd_sim, sim_graphs, false);
  add_i0_options(cmd_sim, sim_i0, true);
  cmd_sim->add_option("--c", sim_c, "parallelism parameter c = 1/p")->check(CLI::Range(1.0, 1e9));
  cmd_sim->add_option("--ticks", sim_ticks, "number of ticks");
  cmd_sim->add_option("--seed", sim_seed, "run seed");
  cmd_sim->add_flag("--start-all-plus", sim_start_plus, "start from the all +1 state");
  cmd_sim->add_option("--out", sim_out, "trajectory CSV path");
  cmd_sim->add_option("--dump-spins", sim_dump, "run-length spin dump path");


  // ---- sweep ----------------------------------------------------------
  auto* cmd_sweep = app.add_subcommand("sweep", "c-sweep with per-run observables");
  GraphArgs sweep_graphs;
  I0Args sweep_i0;
  GridArg sweep_grid;
  double sweep_single_c = 0.0;
  int sweep_ticks = 40, sweep_seeds = 5, sweep_jobs = 1;
  int sweep_burn_c1 = 0, sweep_burn_energy = -1;
  std::uint64_t sweep_master = 0;
  std::string sweep_out = "sweep.csv";
  add_graph_options(cmd_sweep, sweep_graphs, false);
  add_i0_options(cmd_sweep, sweep_i0, true);
  add_grid_option(cmd_sweep, sweep_grid, "--c-grid", "c grid");
  auto* single_c = cmd_sweep->add_option("--c", sweep_single_c, "sweep a single c value");
  cmd_sweep->add_option("--ticks", sweep_ticks, "ticks per run");
  cmd_sweep->add_option("--seeds", sweep_seeds, "replicates per c");
  cmd_sweep->add_option("--seed", sweep_master, "master seed");
  cmd_sweep->add_option("--jobs", sweep_jobs, "worker threads");
  cmd_sweep->add_option("--burn-in-c1", sweep_burn_c1, "burn-in ticks for C(1)");
  cmd_sweep->add_option("--burn-in-energy", sweep_burn_energy,
                        "burn-in ticks for the second-difference measure (-1: ticks/2)");
  cmd_sweep->add_option("--out", sweep_out, "output CSV path");


  // ---- predict --------------------------------------------------------
  auto* cmd_predict = app.add_subcommand("predict", "theoretical boundary curve c*(I0)");
  GraphArgs predict_graphs;
  GridArg predict_grid;
  std::string predict_variant = "both";
  int predict_T = 40, predict_modes = 8;
  double predict_R = 10.0, predict_gamma = 1.0;
  int predict_points = 50;
  std::string predict_out = "boundary.csv";
  add_graph_options(cmd_predict, predict_graphs, false);
  add_grid_option(cmd_predict, predict_grid, "--i0-grid", "I0 grid");
  cmd_predict->add_option("--points", predict_points,
                          "grid size when --i0-grid is omitted (I0min..I0max)");
  cmd_predict->add_option("--T", predict_T, "observation horizon (ticks)");
  cmd_predict->add_option("--R", predict_R, "observability threshold");
  cmd_predict->add_option("--gamma", predict_gamma, "IPR penalty exponent");
  cmd_predict->add_option("--modes", predict_modes, "candidate mode count K");
  cmd_predict->add_option("--variant", predict_variant, "non-ipr, ipr, or both");
  cmd_predict->add_option("--out", predict_out, "output CSV path");


  // ---- compare --------------------------------------------------------
  auto* cmd_compare = app.add_subcommand("compare", "theory-vs-simulation threshold row per graph");
  GraphArgs compare_graphs;
  I0Args compare_i0;
  GridArg compare_grid;
  int compare_ticks = 40, compare_seeds = 5, compare_jobs = 1, compare_T = 40, compare_modes = 8;
  double compare_R = 10.0, compare_gamma = 1.0;
  std::uint64_t compare_master = 0;
  std::string compare_out = "compare.csv";
  add_graph_options(cmd_compare, compare_graphs, true);
  add_i0_options(cmd_compare, compare_i0, true);
  add_grid_option(cmd_compare, compare_grid, "--c-grid", "c grid");
  cmd_compare->add_option("--ticks", compare_ticks, "ticks per run");
  cmd_compare->add_option("--seeds", compare_seeds, "replicates per c");
  cmd_compare->add_option("--seed", compare_master, "master seed");
  cmd_compare->add_option("--jobs", compare_jobs, "worker threads");
  cmd_compare->add_option("--T", compare_T, "theory horizon (ticks)");
  cmd_compare->add_option("--R", compare_R, "observability threshold");
  cmd_compare->add_option("--gamma", compare_gamma, "IPR penalty exponent");
  cmd_compare->add_option("--modes", compare_modes, "candidate mode count K");
  cmd_compare->add_option("--out", compare_out, "output CSV path");


  // ---- sensitivity ----------------------------------------------------
  auto* cmd_sens = app.add_subcommand("sensitivity", "c* versus the observability threshold R");
  GraphArgs sens_graphs;
  I0Args sens_i0;
  std::vector<double> sens_r = {5.0, 10.0, 20.0};
  int sens_T = 40, sens_modes = 8;
  double sens_gamma = 1.0;
  std::string sens_out = "sensitivity.csv";
  add_graph_options(cmd_sens, sens_graphs, false);
  add_i0_options(cmd_sens, sens_i0, true);
  cmd_sens->add_option("--R", sens_r, "observability thresholds to evaluate");
  cmd_sens->add_option("--T", sens_T, "theory horizon (ticks)");
  cmd_sens->add_option("--gamma", sens_gamma, "IPR penalty exponent");
  cmd_sens->add_option("--modes", sens_modes, "candidate mode count K");
  cmd_sens->add_option("--out", sens_out, "output CSV path");


  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // usage error
  }

  if (cmd_parse->parsed()) {
    for (const GraphSource& src : resolve_sources(parse_graphs)) {
      const Graph g = load_graph(src);
      validate_graph(g);
      print_graph_summary(g, build_couplings(g));
      if (!parse_out.empty()) {
        std::ofstream out(parse_out, std::ios::binary);
        if (!out) throw DataError("cannot open output file: " + parse_out);
        out << serialize_gset(g);
      }
    }
    return 0;
  }

  if (cmd_sim->parsed()) {
    const Graph g = load_graph(resolve_sources(sim_graphs).front());
    const CouplingMatrix coupl = build_couplings(g);
    SimParams params;
    params.i0 = sim_i0.explicit_set ? sim_i0.value : coupl.i0_endpoints().second;
    params.c = sim_c;
    params.ticks = sim_ticks;
    params.seed = sim_seed;
    std::optional<SpinState> init;
    if (sim_start_plus) init.emplace(static_cast<std::size_t>(coupl.n), std::int8_t{1});
    const Trajectory traj = run(coupl, params, init ? &*init : nullptr);
    const ObservableReport report = make_report(traj, g, 0, sim_ticks / 2);
    std::cout << "graph " << g.name << ": i0 = " << format_double(params.i0)
              << ", c = " << format_double(params.c) << ", C(1) = " << format_double(report.c1)
              << ", final energy = " << format_double(report.final_energy)
              << ", cut = " << format_double(report.cut)
              << (report.oscillatory ? ", oscillatory" : ", non-oscillatory") << "\n";
    if (!sim_out.empty()) write_trajectory_csv(sim_out, traj);
    if (!sim_dump.empty()) write_spin_dump(sim_dump, traj);
    return 0;
  }

  if (cmd_sweep->parsed()) {
    SweepConfig cfg;
    cfg.source = resolve_sources(sweep_graphs).front();
    apply_i0(sweep_i0, cfg);
    if (single_c->count() > 0 && sweep_grid.set) {
      throw UsageError("use either --c or --c-grid, not both");
    }
    cfg.c_grid = single_c->count() > 0
                     ? std::vector<double>{sweep_single_c}
                     : make_grid(sweep_grid.start, sweep_grid.stop, sweep_grid.step);
    cfg.ticks = sweep_ticks;
    cfg.seeds = sweep_seeds;
    cfg.master_seed = sweep_master;
    cfg.burn_in_c1 = sweep_burn_c1;
    cfg.burn_in_energy = sweep_burn_energy;
    cfg.jobs = sweep_jobs;
    const std::vector<SweepRow> rows = run_sweep(cfg);
    write_sweep_csv(sweep_out, rows);
    std::cout << "wrote " << rows.size() << " rows to " << sweep_out << "\n";
    return 0;
  }

  if (cmd_predict->parsed()) {
    const Graph g = load_graph(resolve_sources(predict_graphs).front());
    const CouplingMatrix coupl = build_couplings(g);
    const auto [i0_min, i0_max] = coupl.i0_endpoints();
    std::vector<double> grid;
    if (predict_grid.set) {
      grid = make_grid(predict_grid.start, predict_grid.stop, predict_grid.step);
    } else {
      if (predict_points < 2) throw DataError("--points must be >= 2");
      for (int k = 0; k < predict_points; ++k) {
        grid.push_back(i0_min + (i0_max - i0_min) * k / (predict_points - 1));
      }
    }
    TheoryParams params;
    params.horizon_T = predict_T;
    params.threshold_R = predict_R;
    params.gamma = predict_gamma;
    params.n_modes_K = predict_modes;
    params.i0 = grid.front();
    std::vector<BoundaryCurve> curves;
    if (predict_variant == "both") {
      curves.push_back(boundary_curve(coupl, grid, params, BoundaryVariant::non_ipr));
      curves.push_back(boundary_curve(coupl, grid, params, BoundaryVariant::ipr_corrected));
    } else {
      curves.push_back(boundary_curve(coupl, grid, params, parse_variant(predict_variant)));
    }
    write_boundary_csv(predict_out, curves);
    std::cout << "wrote boundary curve(s) for " << g.name << " to " << predict_out << "\n";
    return 0;
  }

  if (cmd_compare->parsed()) {
    TheoryParams params;
    params.horizon_T = compare_T;
    params.threshold_R = compare_R;
    params.gamma = compare_gamma;
    params.n_modes_K = compare_modes;
    std::vector<ComparisonRow> rows;
    for (const GraphSource& src : resolve_sources(compare_graphs)) {
      SweepConfig cfg;
      cfg.source = src;
      apply_i0(compare_i0, cfg);
      cfg.c_grid = compare_grid.set
                       ? make_grid(compare_grid.start, compare_grid.stop, compare_grid.step)
                       : default_c_grid();
      cfg.ticks = compare_ticks;
      cfg.seeds = compare_seeds;
      cfg.master_seed = compare_master;
      cfg.jobs = compare_jobs;
      rows.push_back(compare(cfg, params));
      const ComparisonRow& r = rows.back();
      std::cout << r.graph << ": i0_max = " << format_double(r.i0_max_sim) << ", c*(sim) = "
                << (r.c_star_sim ? format_double(*r.c_star_sim) : std::string("unresolved"))
                << ", c*(non-IPR) = " << format_double(r.c_star_non_ipr)
                << ", c*(IPR) = " << format_double(r.c_star_ipr) << "\n";
    }
    write_comparison_csv(compare_out, rows);
    return 0;
  }

  if (cmd_sens->parsed()) {
    const Graph g = load_graph(resolve_sources(sens_graphs).front());
    const CouplingMatrix coupl = build_couplings(g);
    const double i0 = sens_i0.explicit_set ? sens_i0.value : coupl.i0_endpoints().second;
    TheoryParams params;
    params.horizon_T = sens_T;
    params.gamma = sens_gamma;
    params.n_modes_K = sens_modes;
    params.i0 = i0;
    const SensitivityReport report = sensitivity_report(coupl, i0, sens_r, params);
    write_sensitivity_csv(sens_out, report);
    for (const SensitivityRow& r : report.rows) {
      std::cout << g.name << ": R = " << format_double(r.threshold_R)
                << ", c*(non-IPR) = " << format_double(r.c_star_non_ipr)
                << ", c*(IPR) = " << format_double(r.c_star_ipr) << "\n";
    }
    if (!report.monotone_ok) {
      std::cerr << "warning: c* is not monotone non-increasing in R\n";
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const pbit::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pbit::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
