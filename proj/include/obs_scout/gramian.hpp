#pragma once

#include "obs_scout/dynamics.hpp"
#include "obs_scout/sensors.hpp"
#include "obs_scout/types.hpp"

#include <vector>

namespace obs_scout {

/// Empirical observability Gramian: 1/(4 eps^2) times the time integral of
/// Y^T Y, where row Y(t) collects the output differences of +/-eps initial
/// perturbations along each state direction. Symmetric PSD by construction.
struct Gramian {
  Mat5 matrix = Mat5::Zero();
  double epsilon = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
};

/// Symmetrizes, verifies positive semidefiniteness (min eigenvalue no lower
/// than -1e-10 times the max), and stamps the metadata. Throws on an
/// indefinite matrix. Entries are otherwise untouched; roundoff-negative
/// eigenvalues are clamped only in eigen_analysis reports.
Gramian make_gramian(const Mat5& raw, double epsilon, double t_start, double t_end);

struct EigenReport {
  Vec5 eigenvalues = Vec5::Zero();  // descending
  Mat5 eigenvectors = Mat5::Zero();  // column j belongs to eigenvalues[j]
  double lambda_min = 0.0;
  int rank = 0;  // eigenvalues above 1e-8 times the largest
};

/// Symmetric eigendecomposition with a deterministic sign convention: each
/// eigenvector's largest-magnitude component is made positive.
EigenReport eigen_analysis(const Gramian& w);

/// The +/-eps perturbation rollouts of a plan, reduced to per-channel output
/// difference histories on the shared sample grid.
struct OutputEnsemble {
  std::vector<double> times;
  /// One (samples x 5) block per scalar channel; column i holds y(+eps e_i) - y(-eps e_i).
  std::vector<Eigen::Matrix<double, Eigen::Dynamic, 5>> channel_deltas;
  double epsilon = 0.0;
};

/// Runs the ten perturbed rollouts and evaluates every sensor channel along
/// them (noise-free). Throws if any rollout touches a beacon, naming the time.
OutputEnsemble build_output_ensemble(const TrajectoryPlan& plan,
                                     const std::vector<SensorSpec>& sensors, double epsilon);

/// Trapezoidal integral of Y^T Y over the grid window [first, last], scaled by
/// 1/(4 eps^2). An empty window (first == last) gives the zero Gramian.
Gramian integrate_ensemble(const OutputEnsemble& ensemble, std::size_t first, std::size_t last);

/// Full-horizon empirical Gramian of the plan under the given sensors.
Gramian empirical_gramian(const TrajectoryPlan& plan, const std::vector<SensorSpec>& sensors,
                          double epsilon);

/// Closed-form Gramian of a straight segment under position measurements
/// h = (p1, p2), perturbation size eps, horizon t1.
Gramian analytic_line_gramian(double t1, double speed, double theta0, double epsilon);

/// Closed-form Gramian of a constant-turn-rate segment under h = (p1, p2);
/// exact antiderivatives of the trigonometric output differences.
Gramian analytic_circle_gramian(double t2, double speed, double theta0, double omega0,
                                double epsilon);

/// Sum of a line- and a circle-segment Gramian (matching epsilon required).
Gramian dubins_gramian(const Gramian& line, const Gramian& circle);

}  // namespace obs_scout
