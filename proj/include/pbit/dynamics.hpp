#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "pbit/coupling.hpp"
#include "pbit/rng.hpp"

namespace pbit {

// Spin configuration, entries in {-1, +1}.
using SpinState = std::vector<std::int8_t>;

void validate_spins(const SpinState& s, int n);

struct SimParams {
  double i0 = 1.0;      // inverse-temperature gain
  double c = 1.0;       // parallelism parameter; update probability p = 1/c
  int ticks = 40;
  std::uint64_t seed = 0;
  Eigen::VectorXd bias;  // external field h; empty means zero

  double p() const { return 1.0 / c; }
};

void validate_params(const SimParams& params, int n);

struct Trajectory {
  std::vector<SpinState> states;    // ticks + 1 entries, including initial
  std::vector<double> energies;     // ticks + 1 entries
  std::vector<int> active_counts;   // spins selected at tick t, size ticks
  std::vector<int> flip_counts;     // spins changed between t and t+1, size ticks
  SimParams params;
  std::string graph_name;

  int ticks() const { return static_cast<int>(states.size()) - 1; }
};

// H = -(1/2) s^T J s - h^T s. An empty bias vector means h = 0.
double energy(const SpinState& s, const CouplingMatrix& coupl,
              const Eigen::VectorXd& bias = {});

// One tick of the tick-random synchronous update. Every spin is selected
// independently with probability p = 1/c; a selected spin resamples to +1
// with probability (1 + tanh(i0 (h_i + sum_j J_ij s_j)))/2 using the
// pre-tick state for all fields. Draw order: mask for all i, then resample
// draws for selected i in index order.
SpinState tick(const SpinState& s, const CouplingMatrix& coupl,
               const SimParams& params, RngStream& rng);

// Runs params.ticks steps from `initial` (uniform random +-1 from the run
// seed when nullptr) and records every state and energy. Deterministic
// given (seed, params, couplings).
Trajectory run(const CouplingMatrix& coupl, const SimParams& params,
               const SpinState* initial = nullptr);

// Exact one-tick Markov transition matrix over all 2^n states; brute-force
// oracle for the update rule. State index encodes spin i as bit i
// (set bit => +1). Guarded to n <= 12.
Eigen::MatrixXd exact_chain(const CouplingMatrix& coupl, const SimParams& params);

// Trajectory export: CSV columns tick, energy, flips_this_tick.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// Full spin dump, one line per tick, run-length encoded ("+3-2+1" means
// three +1, two -1, one +1). First line is "n ticks".
void write_spin_dump(const std::string& path, const Trajectory& traj);

}  // namespace pbit
