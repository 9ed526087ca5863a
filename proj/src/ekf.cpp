#include "obs_scout/ekf.hpp"

#include "obs_scout/parallel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace obs_scout {

namespace {

// Symmetrize and, if roundoff pushed an eigenvalue slightly negative, project
// it back to zero. Cheap LLT probe first; the eigensolve runs only on failure.
Mat5 enforce_psd(const Mat5& cov) {
  Mat5 sym = 0.5 * (cov + cov.transpose());
  if (Eigen::LLT<Mat5>(sym + 1e-300 * Mat5::Identity()).info() == Eigen::Success) return sym;
  Eigen::SelfAdjointEigenSolver<Mat5> es(sym);
  const double floor = -1e-10 * std::max(es.eigenvalues().cwiseAbs().sum(), 0.0);
  if (es.eigenvalues().minCoeff() < floor)
    throw std::runtime_error("filter covariance lost positive semidefiniteness");
  const Vec5 clamped = es.eigenvalues().cwiseMax(0.0);
  sym = es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (sym + sym.transpose());
}

}  // namespace

Mat5 flow_jacobian(const State5& x, const Control& u, double dt) {
  const double v = u.speed, w = u.turn_rate, th = x[idx::theta];
  Mat5 f = Mat5::Identity();
  if (w == 0.0) {
    f(idx::p1, idx::theta) = -v * std::sin(th) * dt;
    f(idx::p2, idx::theta) = v * std::cos(th) * dt;
  } else {
    f(idx::p1, idx::theta) = v / w * (std::cos(w * dt + th) - std::cos(th));
    f(idx::p2, idx::theta) = v / w * (std::sin(w * dt + th) - std::sin(th));
  }
  f(idx::p1, idx::c1) = dt;
  f(idx::p2, idx::c2) = dt;
  return f;
}

EkfState predict(const EkfState& ekf, const Control& u, double dt, const Mat5& process_noise) {
  if (!(dt > 0.0)) throw std::invalid_argument("predict requires dt > 0");
  EkfState next;
  next.mean = step_rk4(ekf.mean, u, dt);
  const Mat5 f = flow_jacobian(ekf.mean, u, dt);
  next.cov = enforce_psd(f * ekf.cov * f.transpose() + process_noise * dt);
  next.time = ekf.time + dt;
  return next;
}

EkfState update(const EkfState& ekf, const SensorSpec& spec, const std::vector<double>& z) {
  const int m = spec.channel_count();
  if (static_cast<int>(z.size()) != m)
    throw std::invalid_argument("measurement size mismatch for sensor '" + spec.id + "'");

  const std::vector<Jet> jets = jet_measure(spec, seed(ekf.mean, 1));
  Eigen::MatrixXd h(m, 5);
  Eigen::VectorXd innovation(m);
  for (int c = 0; c < m; ++c) {
    if (!std::isfinite(z[c]))
      throw std::invalid_argument("non-finite measurement for sensor '" + spec.id + "'");
    h.row(c) = jets[c].gradient().transpose();
    const double nu = z[c] - jets[c].value();
    innovation[c] = spec.angular() ? wrap_angle(nu) : nu;
  }

  const Eigen::MatrixXd r = spec.sigma * spec.sigma * Eigen::MatrixXd::Identity(m, m);
  const Eigen::MatrixXd s = h * ekf.cov * h.transpose() + r;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-300)
    throw std::runtime_error("innovation covariance not invertible for sensor '" + spec.id +
                             "' (degenerate measurement geometry)");
  const Eigen::Matrix<double, 5, Eigen::Dynamic> gain =
      ekf.cov * h.transpose() * ldlt.solve(Eigen::MatrixXd::Identity(m, m));

  EkfState next = ekf;
  next.mean += gain * innovation;
  const Mat5 ikh = Mat5::Identity() - gain * h;
  next.cov = enforce_psd(ikh * ekf.cov * ikh.transpose() + gain * r * gain.transpose());
  return next;
}

namespace {

State5 draw_initial_error(const Mat5& cov, std::mt19937_64& rng) {
  std::normal_distribution<double> unit(0.0, 1.0);
  Vec5 z;
  for (int i = 0; i < 5; ++i) z[i] = unit(rng);
  Eigen::LLT<Mat5> llt(cov + 1e-300 * Mat5::Identity());
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("initial covariance is not positive definite");
  return llt.matrixL() * z;
}

int active_segment(double t, const std::vector<double>& boundaries) {
  const int K = static_cast<int>(boundaries.size()) - 1;
  for (int k = 0; k < K; ++k)
    if (t < boundaries[k + 1]) return k;
  return K - 1;
}

// Equal-duration window edges over the horizon (the schedule side of the
// sample-grid snapping done in segment_gramians; consistent for boundaries
// that are multiples of dt).
std::vector<double> schedule_boundaries(double total, int segments) {
  std::vector<double> b(segments + 1);
  for (int k = 0; k <= segments; ++k) b[k] = total * k / segments;
  return b;
}

}  // namespace

TrialResult run_trial(const TrajectoryPlan& plan, const SelectionPlan& schedule,
                      const std::vector<SensorSpec>& sensors, std::uint64_t seed_value,
                      const EkfOptions& options) {
  const Trajectory truth = simulate(plan);
  const int segments = static_cast<int>(schedule.choice.size());
  if (segments < 1) throw std::invalid_argument("schedule has no segments");
  for (int choice : schedule.choice)
    if (choice != kNoSensor && (choice < 0 || choice >= static_cast<int>(sensors.size())))
      throw std::invalid_argument("schedule names a sensor index outside the sensor list");
  const std::vector<double> boundaries = schedule_boundaries(truth.times.back(), segments);

  std::mt19937_64 rng(seed_value);
  EkfState ekf;
  ekf.mean = truth.states.front() + draw_initial_error(options.init_cov, rng);
  ekf.cov = options.init_cov;
  ekf.time = 0.0;

  TrialResult result;
  const std::size_t n = truth.size();
  result.times.reserve(n);
  Vec5 sq_sum = Vec5::Zero();

  double next_meas = options.dt_meas;
  auto record = [&](std::size_t i, int sensor) {
    result.times.push_back(truth.times[i]);
    result.truth.push_back(truth.states[i]);
    result.estimate.push_back(ekf.mean);
    result.error.push_back(ekf.mean - truth.states[i]);
    result.cov_diagonal.push_back(ekf.cov.diagonal());
    result.active_sensor.push_back(sensor);
    const Vec5& e = result.error.back();
    result.nees.push_back(e.dot(ekf.cov.ldlt().solve(e)));
    sq_sum += e.cwiseAbs2();
  };

  record(0, kNoSensor);
  const double meas_tol = 1e-9 * options.dt_meas;
  for (std::size_t i = 1; i < n; ++i) {
    const double dt = truth.times[i] - truth.times[i - 1];
    ekf = predict(ekf, truth.controls[i - 1], dt, options.process_noise);
    int used = kNoSensor;
    if (truth.times[i] + meas_tol >= next_meas) {
      const int k = active_segment(truth.times[i], boundaries);
      const int choice = schedule.choice[k];
      if (choice != kNoSensor) {
        const std::vector<double> z = measure_noisy(sensors[choice], truth.states[i], rng);
        ekf = update(ekf, sensors[choice], z);
        used = choice;
      }
      while (next_meas <= truth.times[i] + meas_tol) next_meas += options.dt_meas;
    }
    record(i, used);
  }
  result.rmse = (sq_sum / static_cast<double>(n)).cwiseSqrt();
  return result;
}

MonteCarloSummary monte_carlo(const TrajectoryPlan& plan, const std::vector<SensorSpec>& sensors,
                              const SelectionPlan& optimal, const SelectionPlan& naive,
                              const std::vector<std::uint64_t>& seeds, const EkfOptions& options) {
  const int n_trials = static_cast<int>(seeds.size());
  if (n_trials < 1) throw std::invalid_argument("monte_carlo requires at least one seed");
  std::vector<Vec5> rmse_opt(n_trials), rmse_nai(n_trials);
  parallel_for(n_trials, [&](int j) {
    rmse_opt[j] = run_trial(plan, optimal, sensors, seeds[j], options).rmse;
    rmse_nai[j] = run_trial(plan, naive, sensors, seeds[j], options).rmse;
  });

  MonteCarloSummary summary;
  summary.n_trials = n_trials;
  int wins = 0;
  for (int j = 0; j < n_trials; ++j) {
    summary.mean_rmse_optimal += rmse_opt[j];
    summary.mean_rmse_naive += rmse_nai[j];
    summary.mean_total_optimal += rmse_opt[j].sum();
    summary.mean_total_naive += rmse_nai[j].sum();
    if (rmse_opt[j].sum() <= rmse_nai[j].sum()) ++wins;
  }
  summary.mean_rmse_optimal /= n_trials;
  summary.mean_rmse_naive /= n_trials;
  summary.mean_total_optimal /= n_trials;
  summary.mean_total_naive /= n_trials;
  summary.win_fraction = static_cast<double>(wins) / n_trials;

  auto q95 = [n_trials](std::vector<Vec5>& rows, int state) {
    std::vector<double> v(n_trials);
    for (int j = 0; j < n_trials; ++j) v[j] = rows[j][state];
    std::sort(v.begin(), v.end());
    const double pos = 0.95 * (n_trials - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min<std::size_t>(lo + 1, n_trials - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  for (int i = 0; i < 5; ++i) {
    summary.q95_rmse_optimal[i] = q95(rmse_opt, i);
    summary.q95_rmse_naive[i] = q95(rmse_nai, i);
  }
  return summary;
}

MonteCarloSummary monte_carlo(const TrajectoryPlan& plan, const std::vector<SensorSpec>& sensors,
                              const SelectionPlan& optimal, const SelectionPlan& naive,
                              int n_trials, std::uint64_t base_seed, const EkfOptions& options) {
  if (n_trials < 1) throw std::invalid_argument("monte_carlo requires n_trials >= 1");
  std::vector<std::uint64_t> seeds(n_trials);
  for (int j = 0; j < n_trials; ++j) seeds[j] = base_seed + static_cast<std::uint64_t>(j);
  return monte_carlo(plan, sensors, optimal, naive, seeds, options);
}

}  // namespace obs_scout
