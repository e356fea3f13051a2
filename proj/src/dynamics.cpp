#include "pbit/dynamics.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "pbit/csv.hpp"
#include "pbit/errors.hpp"

namespace pbit {

void validate_spins(const SpinState& s, int n) {
  if (static_cast<int>(s.size()) != n) {
    throw DataError("spin state has " + std::to_string(s.size()) + " entries, expected " +
                    std::to_string(n));
  }
  for (std::int8_t v : s) {
    if (v != 1 && v != -1) throw DataError("spin state entries must be +1 or -1");
  }
}

void validate_params(const SimParams& params, int n) {
  if (!(params.i0 > 0.0)) throw DataError("i0 must be positive");
  if (!(params.c >= 1.0)) throw DataError("c must be >= 1 (p = 1/c in (0, 1])");
  if (params.ticks < 0) throw DataError("ticks must be non-negative");
  if (params.bias.size() != 0 && params.bias.size() != n) {
    throw DataError("bias vector has " + std::to_string(params.bias.size()) +
                    " entries, expected " + std::to_string(n));
  }
}

double energy(const SpinState& s, const CouplingMatrix& coupl, const Eigen::VectorXd& bias) {
  validate_spins(s, coupl.n);
  if (bias.size() != 0 && bias.size() != coupl.n) {
    throw DataError("bias vector dimension mismatch");
  }
  double coupling_term = 0.0;
  for (int i = 0; i < coupl.n; ++i) {
    const double si = s[static_cast<std::size_t>(i)];
    for (SpMat::InnerIterator it(coupl.J, i); it; ++it) {
      coupling_term += it.value() * si * s[static_cast<std::size_t>(it.col())];
    }
  }
  double field_term = 0.0;
  if (bias.size() != 0) {
    for (int i = 0; i < coupl.n; ++i) field_term += bias[i] * s[static_cast<std::size_t>(i)];
  }
  return -0.5 * coupling_term - field_term;
}

SpinState tick(const SpinState& s, const CouplingMatrix& coupl, const SimParams& params,
               RngStream& rng) {
  validate_spins(s, coupl.n);
  validate_params(params, coupl.n);
  const double p = params.p();
  const int n = coupl.n;

  // mask draws for all sites first; the draw order is part of the contract
  std::vector<bool> active(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) active[static_cast<std::size_t>(i)] = rng.bernoulli(p);

  SpinState next = s;
  for (int i = 0; i < n; ++i) {
    if (!active[static_cast<std::size_t>(i)]) continue;
    double h = params.bias.size() != 0 ? params.bias[i] : 0.0;
    for (SpMat::InnerIterator it(coupl.J, i); it; ++it) {
      h += it.value() * s[static_cast<std::size_t>(it.col())];
    }
    const double p_plus = 0.5 * (1.0 + std::tanh(params.i0 * h));
    next[static_cast<std::size_t>(i)] = rng.bernoulli(p_plus) ? std::int8_t{1} : std::int8_t{-1};
  }
  return next;
}

Trajectory run(const CouplingMatrix& coupl, const SimParams& params, const SpinState* initial) {
  validate_params(params, coupl.n);
  RngStream rng(params.seed);

  SpinState state;
  if (initial != nullptr) {
    validate_spins(*initial, coupl.n);
    state = *initial;
  } else {
    state.resize(static_cast<std::size_t>(coupl.n));
    for (auto& v : state) v = rng.random_spin();
  }

  Trajectory traj;
  traj.params = params;
  traj.states.reserve(static_cast<std::size_t>(params.ticks) + 1);
  traj.energies.reserve(static_cast<std::size_t>(params.ticks) + 1);
  traj.active_counts.reserve(static_cast<std::size_t>(params.ticks));
  traj.flip_counts.reserve(static_cast<std::size_t>(params.ticks));

  traj.states.push_back(state);
  traj.energies.push_back(energy(state, coupl, params.bias));

  const double p = params.p();
  for (int t = 0; t < params.ticks; ++t) {
    // inline tick so the per-tick mask statistics can be recorded
    std::vector<bool> active(static_cast<std::size_t>(coupl.n));
    int n_active = 0;
    for (int i = 0; i < coupl.n; ++i) {
      const bool a = rng.bernoulli(p);
      active[static_cast<std::size_t>(i)] = a;
      n_active += a ? 1 : 0;
    }
    SpinState next = state;
    for (int i = 0; i < coupl.n; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      double h = params.bias.size() != 0 ? params.bias[i] : 0.0;
      for (SpMat::InnerIterator it(coupl.J, i); it; ++it) {
        h += it.value() * state[static_cast<std::size_t>(it.col())];
      }
      const double p_plus = 0.5 * (1.0 + std::tanh(params.i0 * h));
      next[static_cast<std::size_t>(i)] = rng.bernoulli(p_plus) ? std::int8_t{1} : std::int8_t{-1};
    }
    int flips = 0;
    for (std::size_t i = 0; i < next.size(); ++i) flips += next[i] != state[i] ? 1 : 0;
    state = std::move(next);
    traj.states.push_back(state);
    traj.energies.push_back(energy(state, coupl, params.bias));
    traj.active_counts.push_back(n_active);
    traj.flip_counts.push_back(flips);
  }
  return traj;
}

Eigen::MatrixXd exact_chain(const CouplingMatrix& coupl, const SimParams& params) {
  validate_params(params, coupl.n);
  const int n = coupl.n;
  if (n > 12) throw DataError("exact_chain: n = " + std::to_string(n) + " exceeds the n <= 12 guard");

  const std::size_t n_states = std::size_t{1} << n;
  const double p = params.p();

  Eigen::MatrixXd P(static_cast<Eigen::Index>(n_states), static_cast<Eigen::Index>(n_states));
  std::vector<double> q_plus(static_cast<std::size_t>(n));
  SpinState spins(static_cast<std::size_t>(n));

  for (std::size_t src = 0; src < n_states; ++src) {
    for (int i = 0; i < n; ++i) {
      spins[static_cast<std::size_t>(i)] = ((src >> i) & 1U) != 0 ? std::int8_t{1} : std::int8_t{-1};
    }
    for (int i = 0; i < n; ++i) {
      double h = params.bias.size() != 0 ? params.bias[i] : 0.0;
      for (SpMat::InnerIterator it(coupl.J, i); it; ++it) {
        h += it.value() * spins[static_cast<std::size_t>(it.col())];
      }
      q_plus[static_cast<std::size_t>(i)] = 0.5 * (1.0 + std::tanh(params.i0 * h));
    }
    for (std::size_t dst = 0; dst < n_states; ++dst) {
      double prob = 1.0;
      for (int i = 0; i < n; ++i) {
        const bool dst_plus = ((dst >> i) & 1U) != 0;
        const bool same = ((src >> i) & 1U) == ((dst >> i) & 1U);
        const double q = dst_plus ? q_plus[static_cast<std::size_t>(i)]
                                  : 1.0 - q_plus[static_cast<std::size_t>(i)];
        prob *= p * q + (same ? 1.0 - p : 0.0);
      }
      P(static_cast<Eigen::Index>(src), static_cast<Eigen::Index>(dst)) = prob;
    }
  }
  return P;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::vector<std::string> header = {"tick", "energy", "flips_this_tick"};
  std::vector<std::vector<std::string>> rows;
  rows.reserve(traj.states.size());
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    rows.push_back({std::to_string(t), format_double(traj.energies[t]),
                    std::to_string(t == 0 ? 0 : traj.flip_counts[t - 1])});
  }
  emit_csv(path, header, rows);
}

void write_spin_dump(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open output file: " + path);
  const int n = traj.states.empty() ? 0 : static_cast<int>(traj.states.front().size());
  out << n << ' ' << traj.ticks() << '\n';
  for (const SpinState& s : traj.states) {
    std::size_t i = 0;
    while (i < s.size()) {
      std::size_t j = i;
      while (j < s.size() && s[j] == s[i]) ++j;
      out << (s[i] > 0 ? '+' : '-') << (j - i);
      i = j;
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace pbit
