#pragma once

#include "obs_scout/dynamics.hpp"
#include "obs_scout/selection.hpp"
#include "obs_scout/sensors.hpp"
#include "obs_scout/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace obs_scout {

struct EkfState {
  State5 mean = State5::Zero();
  Mat5 cov = Mat5::Identity();
  double time = 0.0;
};

/// Exact discrete Jacobian of the closed-form line/arc flow over dt
/// (line when u.turn_rate == 0).
Mat5 flow_jacobian(const State5& x, const Control& u, double dt);

/// Prediction step: the mean advances with an RK4 step, the covariance with
/// the exact flow Jacobian; Q is a per-second rate, applied as Q * dt.
EkfState predict(const EkfState& ekf, const Control& u, double dt, const Mat5& process_noise);

/// Measurement update with Jacobian rows from the jet measurement gradients at
/// the mean, angular innovations wrapped to (-pi, pi], Joseph-form covariance.
/// Throws if the innovation covariance is not invertible.
EkfState update(const EkfState& ekf, const SensorSpec& spec, const std::vector<double>& z);

/// 12 degrees in radians, the default heading uncertainty scale.
inline constexpr double kDefaultHeadingStd = 12.0 * M_PI / 180.0;

struct EkfOptions {
  Mat5 process_noise =
      (Vec5() << 1e-6, 1e-6, 1e-8, 1e-8, 1e-8).finished().asDiagonal();  // per second
  Mat5 init_cov = (Vec5() << 4.0, 4.0, kDefaultHeadingStd * kDefaultHeadingStd, 0.25, 0.25)
                      .finished()
                      .asDiagonal();
  double dt_meas = 0.1;  // measurement interval, decoupled from the sample dt
};

struct TrialResult {
  std::vector<double> times;
  std::vector<State5> truth;
  std::vector<State5> estimate;
  std::vector<State5> error;
  std::vector<Vec5> cov_diagonal;
  std::vector<double> nees;        // e^T P^-1 e per step (filter-consistency statistic)
  std::vector<int> active_sensor;  // per step: sensor index or kNoSensor
  Vec5 rmse = Vec5::Zero();        // per-state, over the whole trace

  double total_rmse() const { return rmse.sum(); }
};

/// One EKF run: truth simulated noise-free along the plan, noisy measurements
/// drawn from the schedule's active sensor at the dt_meas cadence, filter
/// initialized at truth plus a draw from init_cov. Deterministic per seed.
TrialResult run_trial(const TrajectoryPlan& plan, const SelectionPlan& schedule,
                      const std::vector<SensorSpec>& sensors, std::uint64_t seed,
                      const EkfOptions& options);

struct MonteCarloSummary {
  int n_trials = 0;
  Vec5 mean_rmse_optimal = Vec5::Zero();
  Vec5 mean_rmse_naive = Vec5::Zero();
  Vec5 q95_rmse_optimal = Vec5::Zero();
  Vec5 q95_rmse_naive = Vec5::Zero();
  double mean_total_optimal = 0.0;
  double mean_total_naive = 0.0;
  double win_fraction = 0.0;  // trials where optimal total RMSE <= naive's
};

/// Paired trials (same seed per trial) under the optimal and naive schedules;
/// trials run in parallel, the summary depends on the seed set, not its order.
MonteCarloSummary monte_carlo(const TrajectoryPlan& plan, const std::vector<SensorSpec>& sensors,
                              const SelectionPlan& optimal, const SelectionPlan& naive,
                              const std::vector<std::uint64_t>& seeds, const EkfOptions& options);

/// Convenience form with seeds base_seed, base_seed + 1, ...
MonteCarloSummary monte_carlo(const TrajectoryPlan& plan, const std::vector<SensorSpec>& sensors,
                              const SelectionPlan& optimal, const SelectionPlan& naive,
                              int n_trials, std::uint64_t base_seed, const EkfOptions& options);

}  // namespace obs_scout
