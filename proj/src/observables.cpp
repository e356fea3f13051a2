#include "pbit/observables.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pbit/errors.hpp"

namespace pbit {

double autocorrelation_c1(const Trajectory& traj, int burn_in) {
  if (burn_in < 0) throw DataError("autocorrelation_c1: burn_in must be non-negative");
  const int n_states = static_cast<int>(traj.states.size());
  if (n_states < burn_in + 2) {
    throw DataError("autocorrelation_c1: window too short (" + std::to_string(n_states) +
                    " states, burn_in " + std::to_string(burn_in) + ")");
  }
  const std::size_t n = traj.states.front().size();
  double acc = 0.0;
  int pairs = 0;
  for (int t = burn_in; t + 1 < n_states; ++t) {
    const SpinState& a = traj.states[static_cast<std::size_t>(t)];
    const SpinState& b = traj.states[static_cast<std::size_t>(t) + 1];
    long overlap = 0;
    for (std::size_t i = 0; i < n; ++i) overlap += a[i] * b[i];
    acc += static_cast<double>(overlap) / static_cast<double>(n);
    ++pairs;
  }
  return acc / static_cast<double>(pairs);
}

double second_difference_amplitude(std::span<const double> energies, int burn_in) {
  if (burn_in < 0) throw DataError("second_difference_amplitude: burn_in must be non-negative");
  const auto count = static_cast<long>(energies.size()) - burn_in;
  if (count < 3) {
    throw DataError("second_difference_amplitude: need at least 3 post-burn-in samples, have " +
                    std::to_string(std::max<long>(count, 0)));
  }
  const auto* begin = energies.data() + burn_in;
  double lo = begin[0], hi = begin[0];
  for (long t = 1; t < count; ++t) {
    lo = std::min(lo, begin[t]);
    hi = std::max(hi, begin[t]);
  }
  const double range = hi - lo;
  if (range == 0.0) return 0.0;
  double acc = 0.0;
  for (long t = 1; t + 1 < count; ++t) {
    acc += std::abs(begin[t + 1] - 2.0 * begin[t] + begin[t - 1]);
  }
  return acc / static_cast<double>(count - 2) / range;
}

double cut_value(const SpinState& s, const Graph& g) {
  validate_spins(s, g.n_nodes);
  double cut = 0.0;
  for (const Edge& e : g.edges) {
    const int prod = s[static_cast<std::size_t>(e.i)] * s[static_cast<std::size_t>(e.j)];
    cut += e.w * (1.0 - prod) * 0.5;
  }
  return cut;
}

bool classify_oscillatory(double c1) { return c1 < 0.5; }

ObservableReport make_report(const Trajectory& traj, const Graph& g, int burn_in_c1,
                             int burn_in_energy) {
  ObservableReport r;
  r.c1 = autocorrelation_c1(traj, burn_in_c1);
  r.second_diff_norm = second_difference_amplitude(traj.energies, burn_in_energy);
  r.cut = cut_value(traj.states.back(), g);
  r.final_energy = traj.energies.back();
  r.oscillatory = classify_oscillatory(r.c1);
  return r;
}

ThresholdEstimate detect_sim_threshold(std::span<const C1Sample> rows) {
  if (rows.empty()) throw DataError("detect_sim_threshold: empty input");

  std::map<double, std::pair<double, int>> by_c;  // c -> (sum c1, count)
  for (const C1Sample& row : rows) {
    auto& [sum, cnt] = by_c[row.c];
    sum += row.c1;
    ++cnt;
  }

  ThresholdEstimate est;
  est.criterion = ThresholdCriterion::autocorrelation;
  for (const auto& [c, agg] : by_c) est.n_seeds = std::max(est.n_seeds, agg.second);

  for (const auto& [c, agg] : by_c) {
    const double mean_c1 = agg.first / static_cast<double>(agg.second);
    if (mean_c1 >= 0.5) {
      est.c_star = c;
      break;
    }
  }
  return est;
}

}  // namespace pbit
