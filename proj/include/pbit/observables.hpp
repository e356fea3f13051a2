#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pbit/dynamics.hpp"
#include "pbit/graph.hpp"

namespace pbit {

struct ObservableReport {
  double c1 = 1.0;                // one-step autocorrelation C(1)
  double second_diff_norm = 0.0;  // normalized second-difference amplitude
  double cut = 0.0;               // cut value of the final state
  double final_energy = 0.0;
  bool oscillatory = false;       // == (c1 < 0.5)
};

// C(1) = (1/N) sum_i <s_i(t) s_i(t+1)>_t averaged over all consecutive
// pairs with t >= burn_in.
double autocorrelation_c1(const Trajectory& traj, int burn_in = 0);

// Mean |E_{t+1} - 2 E_t + E_{t-1}| over the post-burn-in trace, normalized
// by the post-burn-in energy range; 0 when the range is 0.
double second_difference_amplitude(std::span<const double> energies, int burn_in);

// sum over edges of w (1 - s_i s_j) / 2
double cut_value(const SpinState& s, const Graph& g);

// The oscillation criterion: C(1) < 0.5, strict.
bool classify_oscillatory(double c1);

ObservableReport make_report(const Trajectory& traj, const Graph& g,
                             int burn_in_c1, int burn_in_energy);

struct C1Sample {
  double c;
  std::uint64_t seed;
  double c1;
};

enum class ThresholdCriterion { autocorrelation };

struct ThresholdEstimate {
  std::optional<double> c_star;  // empty: unresolved on the swept grid
  ThresholdCriterion criterion = ThresholdCriterion::autocorrelation;
  int n_seeds = 0;
};

// Seed-averages C(1) per grid c; c_star is the smallest grid c whose mean
// C(1) reaches 0.5. Rows must cover a monotone c-grid with >= 1 seed per c.
ThresholdEstimate detect_sim_threshold(std::span<const C1Sample> rows);

}  // namespace pbit
