#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "polarisim/model.hpp"
#include "polarisim/observables.hpp"
#include "polarisim/propagator.hpp"

namespace polarisim {

struct TrajectoryConfig {
  double dt = 0.0;
  int n_steps = 0;
  std::vector<double> snapshot_times;
  int record_stride = 1;  // steps between population records
  SamplingMode mode = SamplingMode::independent;
  std::uint64_t seed = 0;
  std::uint64_t trajectory_index = 0;

  static TrajectoryConfig from_params(const ModelParameters& p);
};

struct Snapshot {
  double requested_time = 0.0;  // as configured
  double time = 0.0;            // nearest step actually recorded
  std::vector<double> p_upper_k;
  std::vector<double> p_lower_k;
  double dark_total = 0.0;
};

/// Trajectory-averaged observables. For a single trajectory the averages are
/// just that trajectory's values.
struct EnsembleResult {
  int n_trajectories = 0;
  std::vector<double> times;
  std::vector<double> pop_upper;
  std::vector<double> pop_lower;
  std::vector<double> pop_dark;
  std::vector<double> p_in;
  std::vector<double> p_out;
  std::vector<Snapshot> snapshots;

  WindowSpec window;
  double k_bar = 0.0;
  double initial_mean_energy = 0.0;

  // worst case over all records of all trajectories
  double max_norm_error = 0.0;          // |<psi|psi> - 1|
  double max_completeness_error = 0.0;  // |P_+ + P_- + P_d(direct) - 1|

  /// p_in / P_- per record; empty where P_- < kMinLowerPopulation.
  std::vector<std::optional<double>> in_relative() const;
};

class TrajectoryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs one Ehrenfest trajectory from a freshly prepared upper-polariton
/// packet. Deterministic given (seed, trajectory_index).
EnsembleResult run_trajectory(const TrajectoryConfig& config, const Model& model);

/// Averages params.n_trajectories trajectories, trajectory i using counter
/// stream i of the master seed. Workers pull trajectories dynamically, but the
/// reduction runs in trajectory order, so the result is bitwise independent of
/// `threads`.
EnsembleResult run_ensemble(const Model& model, int threads = 1);

}  // namespace polarisim
