#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tvq/model.hpp"
#include "tvq/rng.hpp"

namespace tvq {

struct SimConfig {
  ModelSpec spec;
  double n = 100;
  int reps = 100;
  std::uint64_t seed = 1;
  double grid_step = 1e-2;
  double horizon = -1;    // observation horizon; defaults to spec.horizon
  double tail = 4.0;      // extra simulated time past the horizon so V resolves
  int parallel = 1;

  [[nodiscard]] double obs_horizon() const { return horizon > 0 ? horizon : spec.horizon; }
};

/// Staffing level ceil(n s(t)).
long staffing_level(const ModelSpec& spec, double n, double t);

/// Epochs in (0, t_end] where ceil(n s(t)) changes, with the new level.
struct StaffingChange {
  double time;
  long level;
};
std::vector<StaffingChange> staffing_changes(const ModelSpec& spec, double n, double t_end);

/// Nonhomogeneous Poisson arrivals of rate n lambda(t) on [0, t_end] by
/// thinning against a per-chunk bound.
std::vector<double> gen_arrivals(const ModelSpec& spec, double n, double t_end, Rng& rng);

/// One replication observed on the grid t_k = k * grid_step.
struct SamplePath {
  std::vector<double> t;
  std::vector<long> X, Q, B, A, N, D, E, forced;
  std::vector<double> W, V;  // V is NaN where it did not resolve
  long x0 = 0;
  // Counters at the end of the simulated run (past the horizon).
  long final_X = 0, final_N = 0, final_D = 0, final_A = 0, final_forced = 0;

  /// X(0) + N - D - A - forced == X at every grid time and at the end.
  [[nodiscard]] bool conserved() const;
};

/// Throws std::invalid_argument when the observation horizon exceeds T.
SamplePath run_replication(const SimConfig& cfg, int replication);

void write_path_csv(const SamplePath& p, std::ostream& os);

/// Single-pass mean/variance with an associative merge.
struct RunningStats {
  long count = 0;
  double mean = 0, m2 = 0;

  void add(double x);
  void merge(const RunningStats& o);
  [[nodiscard]] double variance() const;  // NaN with fewer than 2 samples
  [[nodiscard]] double se() const;
};

struct SimEstimate {
  double n = 1;
  int reps = 0;
  std::vector<double> t;
  std::vector<RunningStats> X, Q, B, W, V, A;
  bool all_conserved = true;
};

/// Runs cfg.reps replications (in batches of cfg.parallel threads) and
/// aggregates them in replication order, so results do not depend on the
/// parallelism.
SimEstimate estimate(const SimConfig& cfg);

/// CSV: t, mean_X, se_X, var_X, mean_Q, var_Q, mean_B, var_B, mean_W, var_W,
/// mean_V, var_V, then scaled views mean_X_n, var_X_n, mean_Q_n, var_Q_n,
/// mean_B_n, var_B_n, var_W_n, var_V_n (means and variances divided by n,
/// waiting-time variances multiplied by n).
void write_estimate_csv(const SimEstimate& e, std::ostream& os);

}  // namespace tvq
