// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Criteria 2 and 3 need the
// standard G-set benchmark files G1, G6, G11 (not redistributable here);
// point PBIT_GSET_DIR at a directory containing them, or place them under
// ./data/gset. When absent those criteria report FAIL (missing input) and
// criterion 3 falls back to a statistically equivalent proxy instance so the
// machinery is still exercised end to end.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "pbit/coupling.hpp"
#include "pbit/csv.hpp"
#include "pbit/dynamics.hpp"
#include "pbit/graph.hpp"
#include "pbit/harness.hpp"
#include "pbit/observables.hpp"
#include "pbit/rng.hpp"
#include "pbit/theory.hpp"

using namespace pbit;

namespace {

struct Summary {
  int passed = 0;
  int failed = 0;

  void report(int criterion, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    (ok ? passed : failed) += 1;
  }
};

std::optional<std::string> find_gset_file(const std::string& name) {
  std::vector<std::string> dirs;
  if (const char* env = std::getenv("PBIT_GSET_DIR")) dirs.push_back(env);
  dirs.insert(dirs.end(), {"data/gset", "../data/gset", "../../data/gset"});
  for (const std::string& dir : dirs) {
    for (const std::string& file : {name, name + ".txt", name + ".gset"}) {
      const std::filesystem::path path = std::filesystem::path(dir) / file;
      std::error_code ec;
      if (std::filesystem::exists(path, ec)) return path.string();
    }
  }
  return std::nullopt;
}

std::string fmt(double v) { return format_double(v); }

// ---- criterion 1: temperature normalization --------------------------------

void criterion_1(Summary& s) {
  const CouplingMatrix t1 = build_couplings(generate_toy(ToyKind::toy1));
  const CouplingMatrix t2 = build_couplings(generate_toy(ToyKind::toy2));
  const bool ok = std::abs(t1.i0_max - 11.55) <= 0.01 && std::abs(t2.i0_max - 13.33) <= 0.01;
  s.report(1, ok,
           "i0_max reproduction: Toy-1 = " + fmt(t1.i0_max) + " (want 11.55 +- 0.01), Toy-2 = " +
               fmt(t2.i0_max) + " (want 13.33 +- 0.01)");
}

// ---- criterion 2: G-set theory thresholds -----------------------------------

void criterion_2(Summary& s) {
  struct Target {
    const char* name;
    double i0, non_ipr, non_ipr_tol, ipr, ipr_tol;
  };
  const Target targets[] = {
      {"G11", 5.01, 1.04, 0.05, 1.02, 0.05},
      {"G6", 1.45, 1.15, 0.05, 1.10, 0.05},
      {"G1", 1.49, 2.86, 0.10, 2.86, 0.10},
  };
  bool all_ok = true;
  std::string detail = "G-set theory thresholds:";
  for (const Target& t : targets) {
    const auto path = find_gset_file(t.name);
    if (!path) {
      all_ok = false;
      detail += std::string(" ") + t.name + "=MISSING-INPUT(user-supplied G-set file not found)";
      continue;
    }
    const CouplingMatrix coupl = build_couplings(load_gset_file(*path));
    TheoryParams params;
    params.i0 = t.i0;
    const double c_non = critical_c(coupl, params, BoundaryVariant::non_ipr);
    const double c_ipr = critical_c(coupl, params, BoundaryVariant::ipr_corrected);
    const bool ok =
        std::abs(c_non - t.non_ipr) <= t.non_ipr_tol && std::abs(c_ipr - t.ipr) <= t.ipr_tol;
    all_ok = all_ok && ok;
    detail += std::string(" ") + t.name + ": non-IPR=" + fmt(c_non) + " (want " + fmt(t.non_ipr) +
              "+-" + fmt(t.non_ipr_tol) + "), IPR=" + fmt(c_ipr) + " (want " + fmt(t.ipr) + "+-" +
              fmt(t.ipr_tol) + ");";
  }
  s.report(2, all_ok, detail);
}

// ---- criterion 3: G1 simulation threshold ------------------------------------

Graph g1_equivalent_proxy() {
  // same shape as G1: 800 nodes, exactly 19176 distinct +1 edges,
  // via a seeded partial Fisher-Yates over all node pairs
  const int n = 800;
  const int m = 19176;
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  RngStream rng(0x67315F70u);
  Graph g;
  g.n_nodes = n;
  g.name = "G1-proxy";
  for (int k = 0; k < m; ++k) {
    const std::size_t pick = static_cast<std::size_t>(k) +
                             static_cast<std::size_t>(rng.next_u64() % (pairs.size() - k));
    std::swap(pairs[static_cast<std::size_t>(k)], pairs[pick]);
    g.edges.push_back(Edge{pairs[static_cast<std::size_t>(k)].first,
                           pairs[static_cast<std::size_t>(k)].second, 1.0});
  }
  g.weight_type = WeightType::plus_one;
  return g;
}

void criterion_3(Summary& s) {
  const auto path = find_gset_file("G1");
  const bool have_g1 = path.has_value();
  const Graph g = have_g1 ? load_gset_file(*path) : g1_equivalent_proxy();
  const CouplingMatrix coupl = build_couplings(g);

  SweepConfig cfg;
  cfg.source = ToySource{ToyKind::toy1, 0};  // unused, sweep runs on the loaded graph
  cfg.c_grid = default_c_grid();             // 1.0 to 5.0 step 0.05
  cfg.ticks = 40;
  cfg.seeds = 5;
  cfg.master_seed = 2024;
  cfg.jobs = 4;
  const std::vector<SweepRow> rows = run_sweep(g, coupl, cfg);

  std::vector<C1Sample> samples;
  for (const SweepRow& r : rows) samples.push_back({r.c, r.seed, r.c1});
  const ThresholdEstimate est = detect_sim_threshold(samples);

  const bool in_band = est.c_star && *est.c_star >= 1.6 && *est.c_star <= 2.6;
  const std::string value = est.c_star ? fmt(*est.c_star) : std::string("unresolved");
  if (have_g1) {
    s.report(3, in_band,
             "G1 sweep (Table-S1 settings): c*(sim) = " + value + ", band [1.6, 2.6]");
  } else {
    s.report(3, false,
             "MISSING-INPUT(user-supplied G1 file not found); proxy instance (800 nodes, 19176 "
             "+1 edges, i0_max = " +
                 fmt(coupl.i0_max) + ") gives c*(sim) = " + value + ", band [1.6, 2.6] " +
                 (in_band ? "satisfied by proxy" : "violated by proxy"));
  }
}

// ---- criterion 4: toy theory clamps ------------------------------------------

void criterion_4(Summary& s) {
  bool all_ok = true;
  std::string detail = "toy theory thresholds (want exactly 1.00 via clamp):";
  for (auto kind : {ToyKind::toy1, ToyKind::toy2, ToyKind::toy3, ToyKind::toy4, ToyKind::toy5}) {
    const Graph g = generate_toy(kind);
    const CouplingMatrix coupl = build_couplings(g);
    TheoryParams params;
    params.i0 = coupl.i0_max;
    const double c_non = critical_c(coupl, params, BoundaryVariant::non_ipr);
    const double c_ipr = critical_c(coupl, params, BoundaryVariant::ipr_corrected);
    const bool ok = c_non == 1.0 && c_ipr == 1.0;
    all_ok = all_ok && ok;
    detail += " " + g.name + "=" + fmt(c_non) + "/" + fmt(c_ipr) + ";";
  }
  s.report(4, all_ok, detail);
}

// ---- criterion 5: Monte-Carlo vs exact chain ---------------------------------

void criterion_5(Summary& s) {
  bool all_ok = true;
  int checked_pairs = 0;
  double worst_sigma = 0.0;
  for (auto kind : {ToyKind::toy1, ToyKind::toy2}) {
    const Graph g = generate_toy(kind);
    const CouplingMatrix coupl = build_couplings(g);
    const int n = g.n_nodes;
    const int n_states = 1 << n;
    const int samples_per_state = 100000 / n_states;  // 1e5 ticks per setting

    const std::pair<double, double> settings[] = {
        {0.1 / coupl.s_j, 1.0}, {1.0 / coupl.s_j, 2.0}, {10.0 / coupl.s_j, 1.0}};
    for (const auto& [i0, c] : settings) {
      SimParams params;
      params.i0 = i0;
      params.c = c;
      const Eigen::MatrixXd P = exact_chain(coupl, params);
      RngStream rng(hash_combine(static_cast<std::uint64_t>(kind), static_cast<std::uint64_t>(c)));
      for (int src = 0; src < n_states; ++src) {
        SpinState state(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          state[static_cast<std::size_t>(i)] = ((src >> i) & 1) != 0 ? 1 : -1;
        }
        std::vector<double> counts(static_cast<std::size_t>(n_states), 0.0);
        for (int rep = 0; rep < samples_per_state; ++rep) {
          const SpinState next = tick(state, coupl, params, rng);
          int dst = 0;
          for (int i = 0; i < n; ++i) {
            if (next[static_cast<std::size_t>(i)] > 0) dst |= 1 << i;
          }
          counts[static_cast<std::size_t>(dst)] += 1.0;
        }
        for (int dst = 0; dst < n_states; ++dst) {
          const double prob = P(src, dst);
          if (prob < 0.01) continue;
          const double freq = counts[static_cast<std::size_t>(dst)] / samples_per_state;
          const double se = std::sqrt(prob * (1.0 - prob) / samples_per_state);
          if (se == 0.0) {
            // transition is deterministic under tanh saturation
            all_ok = all_ok && freq == prob;
          } else {
            const double sigmas = std::abs(freq - prob) / se;
            worst_sigma = std::max(worst_sigma, sigmas);
            all_ok = all_ok && sigmas <= 4.0;
          }
          ++checked_pairs;
        }
      }
    }
  }
  s.report(5, all_ok,
           "oracle equivalence on Toy-1/Toy-2 across 3 (i0, c) settings: " +
               std::to_string(checked_pairs) + " state pairs with P >= 0.01, worst deviation " +
               fmt(worst_sigma) + " SE (limit 4)");
}

// ---- criterion 6: spectral proxy validation ----------------------------------

void criterion_6(Summary& s) {
  RngStream rng(606);
  bool all_ok = true;
  double worst_rel = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 8 + static_cast<int>(rng.next_u64() % 57);  // up to 64
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) M(i, j) = rng.uniform_pm1();
    }
    Eigen::MatrixXd A = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
    const double rho =
        std::max(std::abs(solver.eigenvalues()(0)), std::abs(solver.eigenvalues()(n - 1)));
    A *= (0.5 + 0.7 * rng.uniform01()) / rho;  // spectral radius in [0.5, 1.2]
    solver.compute(A);
    const double lam =
        std::max(std::abs(solver.eigenvalues()(0)), std::abs(solver.eigenvalues()(n - 1)));
    const double expected = std::pow(lam, 40.0);
    const double got = finite_time_norm_growth(A, 40);
    const double rel = std::abs(got - expected) / expected;
    worst_rel = std::max(worst_rel, rel);
    all_ok = all_ok && rel <= 1e-9;
  }
  s.report(6, all_ok,
           "||A^40|| equals max(|lambda_min|, |lambda_max|)^40 on 20 random symmetric matrices, "
           "worst relative deviation " +
               fmt(worst_rel) + " (limit 1e-9)");
}

// ---- criterion 7: closed-form boundary oracle --------------------------------

void criterion_7(Summary& s) {
  const double r_set[] = {5.0, 10.0, 20.0};
  const int t_set[] = {20, 40, 80};
  bool all_ok = true;
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double q = 1.1 + (10.0 - 1.1) * k / 49.0;
    TheoryParams params;
    params.threshold_R = r_set[k % 3];
    params.horizon_T = t_set[(k / 3) % 3];
    const double closed =
        (1.0 + q) / (1.0 + std::pow(params.threshold_R, 1.0 / params.horizon_T));
    const double expected = std::max(1.0, closed);
    const double got = critical_c_scalar(-q, params);
    const double err = std::abs(got - expected);
    worst = std::max(worst, err);
    all_ok = all_ok && err <= 1e-3;
  }
  s.report(7, all_ok,
           "bisection matches (1+q)/(1+R^(1/T)) over 50 (q, R, T) triples, worst |error| " +
               fmt(worst) + " (limit 1e-3)");
}

// ---- criterion 8: deterministic period-2 limit -------------------------------

void criterion_8(Summary& s) {
  const Graph g = []{
    Graph g2;
    g2.n_nodes = 2;
    g2.edges = {Edge{0, 1, 1.0}};
    g2.name = "af-edge";
    g2.weight_type = WeightType::plus_one;
    return g2;
  }();
  const CouplingMatrix coupl = build_couplings(g);

  SimParams params;
  params.i0 = 50.0;
  params.c = 1.0;
  params.ticks = 40;
  const SpinState aligned{1, 1};
  const Trajectory traj = run(coupl, params, &aligned);
  const double c1 = autocorrelation_c1(traj);
  const bool exact = c1 == -1.0 && classify_oscillatory(c1);

  double mean_c1 = 0.0;
  const int n_seeds = 5;
  for (int seed = 0; seed < n_seeds; ++seed) {
    SimParams slow = params;
    slow.c = 4.0;
    slow.seed = static_cast<std::uint64_t>(seed) + 1;
    mean_c1 += autocorrelation_c1(run(coupl, slow, &aligned));
  }
  mean_c1 /= n_seeds;
  const bool suppressed = mean_c1 > 0.5;

  s.report(8, exact && suppressed,
           "AF edge at p=1, i0=50: C(1) = " + fmt(c1) + " (want exactly -1), c=4 seed-average "
           "C(1) = " + fmt(mean_c1) + " (want > 0.5)");
}

// ---- criterion 9: property suite ----------------------------------------------

Graph random_pm_graph(int n, double edge_prob, std::uint64_t seed, const std::string& name) {
  RngStream rng(seed);
  Graph g;
  g.n_nodes = n;
  g.name = name;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.bernoulli(edge_prob)) {
        g.edges.push_back(Edge{i, j, rng.bernoulli(0.5) ? 1.0 : -1.0});
      }
    }
  }
  g.weight_type = infer_weight_type(g.edges);
  return g;
}

void criterion_9(Summary& s) {
  bool ok_alpha = true;
  for (double sigma : {0.5, 1.0, 2.0}) {
    double prev = 2.0;
    for (int k = 1; k <= 20; ++k) {
      const double val = alpha_eff(0.3 * k, sigma);
      ok_alpha = ok_alpha && val <= prev + 1e-12;
      prev = val;
    }
  }

  bool ok_r_monotone = true;
  bool ok_ipr_bounds = true;
  bool ok_variant_order = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Graph g = random_pm_graph(24, 0.25, seed, "prop-er");
    const CouplingMatrix coupl = build_couplings(g);
    TheoryParams params;
    params.i0 = coupl.i0_max;
    double prev_non = std::numeric_limits<double>::infinity();
    double prev_ipr = std::numeric_limits<double>::infinity();
    for (double r : {5.0, 10.0, 20.0}) {
      TheoryParams p = params;
      p.threshold_R = r;
      const double c_non = critical_c(coupl, p, BoundaryVariant::non_ipr);
      const double c_ipr = critical_c(coupl, p, BoundaryVariant::ipr_corrected);
      ok_r_monotone = ok_r_monotone && c_non <= prev_non + 1e-9 && c_ipr <= prev_ipr + 1e-9;
      prev_non = c_non;
      prev_ipr = c_ipr;
    }
    for (const ModeInfo& mode : extreme_modes(coupl.J, std::min(8, coupl.n))) {
      ok_ipr_bounds = ok_ipr_bounds && mode.ipr >= 1.0 / coupl.n - 1e-12 &&
                      mode.ipr <= 1.0 + 1e-12;
    }
  }

  // variant ordering on every Table-1 instance available here
  std::vector<CouplingMatrix> instances;
  for (auto kind : {ToyKind::toy1, ToyKind::toy2, ToyKind::toy3, ToyKind::toy4, ToyKind::toy5}) {
    instances.push_back(build_couplings(generate_toy(kind)));
  }
  instances.push_back(build_couplings(generate_toy(ToyKind::toy6, 1)));
  instances.push_back(build_couplings(generate_toy(ToyKind::toy6, 2)));
  instances.push_back(build_couplings(generate_toy(ToyKind::toy7, 1)));
  for (const char* name : {"G1", "G6", "G11"}) {
    if (const auto path = find_gset_file(name)) {
      instances.push_back(build_couplings(load_gset_file(*path)));
    }
  }
  for (const CouplingMatrix& coupl : instances) {
    TheoryParams params;
    params.i0 = coupl.i0_max;
    const double c_non = critical_c(coupl, params, BoundaryVariant::non_ipr);
    const double c_ipr = critical_c(coupl, params, BoundaryVariant::ipr_corrected);
    ok_variant_order = ok_variant_order && c_ipr <= c_non + 1e-9;
  }

  // energy/cut affine identity on 100 random states per toy graph
  bool ok_affine = true;
  RngStream rng(909);
  for (int kind = 1; kind <= 7; ++kind) {
    const Graph g = generate_toy(static_cast<ToyKind>(kind), 7);
    const CouplingMatrix coupl = build_couplings(g);
    double total_w = 0.0;
    for (const Edge& e : g.edges) total_w += e.w;
    for (int rep = 0; rep < 100; ++rep) {
      SpinState state(static_cast<std::size_t>(g.n_nodes));
      for (auto& v : state) v = rng.random_spin();
      const double lhs = energy(state, coupl) + 2.0 * cut_value(state, g);
      ok_affine = ok_affine && std::abs(lhs - total_w) <= 1e-9 * std::max(1.0, std::abs(total_w));
    }
  }

  const bool all_ok = ok_alpha && ok_r_monotone && ok_ipr_bounds && ok_variant_order && ok_affine;
  s.report(9, all_ok,
           std::string("property suite: alpha_eff monotone [") + (ok_alpha ? "ok" : "VIOLATED") +
               "], c* non-increasing in R on 10 random graphs [" +
               (ok_r_monotone ? "ok" : "VIOLATED") + "], IPR bounds [" +
               (ok_ipr_bounds ? "ok" : "VIOLATED") + "], c*(IPR) <= c*(non-IPR) [" +
               (ok_variant_order ? "ok" : "VIOLATED") + "], energy/cut affine identity [" +
               (ok_affine ? "ok" : "VIOLATED") + "]");
}

// ---- criterion 10: documented exclusions -------------------------------------

void criterion_10(Summary& s) {
  // Large G-set rows (G35-G64) and exact ER edge counts are excluded from
  // quantitative acceptance; the ER concentration bands stand in for them.
  const Graph t6a = generate_toy(ToyKind::toy6, 1);
  const Graph t6b = generate_toy(ToyKind::toy6, 2);
  const Graph t7 = generate_toy(ToyKind::toy7, 1);
  const bool band6a = t6a.edges.size() >= 82 && t6a.edges.size() <= 110;
  const bool band6b = t6b.edges.size() >= 82 && t6b.edges.size() <= 110;
  const bool band7 = t7.edges.size() >= 164 && t7.edges.size() <= 220;
  const bool ok = band6a && band6b && band7;
  s.report(10, ok,
           "excluded targets covered by concentration bands: Toy-6 |E| = " +
               std::to_string(t6a.edges.size()) + "/" + std::to_string(t6b.edges.size()) +
               " (band 96 +- 15%), Toy-7 |E| = " + std::to_string(t7.edges.size()) +
               " (band 192 +- 15%); G35/G39/G58/G63/G64 supported as inputs, quantitative "
               "reproduction out of scope");
}

}  // namespace

int main() {
  std::printf("acceptance suite: tick-random p-bit oscillation toolkit\n");
  Summary summary;
  criterion_1(summary);
  criterion_2(summary);
  criterion_3(summary);
  criterion_4(summary);
  criterion_5(summary);
  criterion_6(summary);
  criterion_7(summary);
  criterion_8(summary);
  criterion_9(summary);
  criterion_10(summary);
  std::printf("%d passed, %d failed\n", summary.passed, summary.failed);
  return summary.failed == 0 ? 0 : 1;
}
