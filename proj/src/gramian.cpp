#include "obs_scout/gramian.hpp"

#include "obs_scout/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace obs_scout {

Gramian make_gramian(const Mat5& raw, double epsilon, double t_start, double t_end) {
  Gramian w;
  w.matrix = 0.5 * (raw + raw.transpose());
  w.epsilon = epsilon;
  w.t_start = t_start;
  w.t_end = t_end;
  Eigen::SelfAdjointEigenSolver<Mat5> es(w.matrix, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo < -1e-10 * std::max(hi, 0.0))
    throw std::runtime_error("gramian assembly produced an indefinite matrix (min eigenvalue " +
                             std::to_string(lo) + ")");
  return w;
}

EigenReport eigen_analysis(const Gramian& w) {
  Eigen::SelfAdjointEigenSolver<Mat5> es(w.matrix);
  EigenReport report;
  const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
  for (int j = 0; j < 5; ++j) {  // flip to descending order
    report.eigenvalues[j] = es.eigenvalues()[4 - j];
    // roundoff-negative eigenvalues of a PSD matrix are clamped in the report
    if (report.eigenvalues[j] < 0.0 && report.eigenvalues[j] >= -1e-10 * top)
      report.eigenvalues[j] = 0.0;
    report.eigenvectors.col(j) = es.eigenvectors().col(4 - j);
  }
  for (int j = 0; j < 5; ++j) {
    int lead = 0;
    report.eigenvectors.col(j).cwiseAbs().maxCoeff(&lead);
    if (report.eigenvectors(lead, j) < 0.0) report.eigenvectors.col(j) *= -1.0;
  }
  report.lambda_min = report.eigenvalues[4];
  for (int j = 0; j < 5; ++j)
    if (report.eigenvalues[j] > 1e-8 * top) ++report.rank;
  return report;
}

namespace {

double channel_delta(const SensorSpec& spec, double plus, double minus) {
  const double d = plus - minus;
  return spec.angular() ? wrap_angle(d) : d;  // keep perturbation differences off the 2pi branch
}

}  // namespace

OutputEnsemble build_output_ensemble(const TrajectoryPlan& plan,
                                     const std::vector<SensorSpec>& sensors, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("perturbation size must be > 0");
  validate(plan);

  std::array<Trajectory, 5> plus, minus;
  parallel_for(10, [&](int k) {
    TrajectoryPlan perturbed = plan;
    const int dir = k / 2;
    perturbed.initial[dir] += (k % 2 == 0 ? epsilon : -epsilon);
    (k % 2 == 0 ? plus : minus)[dir] = simulate(perturbed);
  });

  OutputEnsemble ensemble;
  ensemble.times = plus[0].times;
  ensemble.epsilon = epsilon;
  const auto samples = static_cast<Eigen::Index>(ensemble.times.size());

  for (const SensorSpec& spec : sensors) {
    std::vector<Eigen::Matrix<double, Eigen::Dynamic, 5>> deltas(
        spec.channel_count(), Eigen::Matrix<double, Eigen::Dynamic, 5>(samples, 5));
    for (Eigen::Index s = 0; s < samples; ++s) {
      for (int dir = 0; dir < 5; ++dir) {
        std::vector<double> yp, ym;
        try {
          yp = measure(spec, plus[dir].states[s]);
          ym = measure(spec, minus[dir].states[s]);
        } catch (const std::domain_error& e) {
          std::ostringstream msg;
          msg << e.what() << " at t = " << ensemble.times[s] << " s during a perturbation rollout";
          throw std::runtime_error(msg.str());
        }
        for (int c = 0; c < spec.channel_count(); ++c)
          deltas[c](s, dir) = channel_delta(spec, yp[c], ym[c]);
      }
    }
    for (auto& d : deltas) ensemble.channel_deltas.push_back(std::move(d));
  }
  return ensemble;
}

Gramian integrate_ensemble(const OutputEnsemble& ensemble, std::size_t first, std::size_t last) {
  if (first > last || last >= ensemble.times.size())
    throw std::invalid_argument("ensemble window out of range");
  Mat5 acc = Mat5::Zero();
  for (const auto& d : ensemble.channel_deltas) {
    for (std::size_t s = first; s < last; ++s) {
      const double h = ensemble.times[s + 1] - ensemble.times[s];
      const Mat5 a = d.row(s).transpose() * d.row(s);
      const Mat5 b = d.row(s + 1).transpose() * d.row(s + 1);
      acc += 0.5 * h * (a + b);
    }
  }
  acc /= 4.0 * ensemble.epsilon * ensemble.epsilon;
  return make_gramian(acc, ensemble.epsilon, ensemble.times[first], ensemble.times[last]);
}

Gramian empirical_gramian(const TrajectoryPlan& plan, const std::vector<SensorSpec>& sensors,
                          double epsilon) {
  const OutputEnsemble ensemble = build_output_ensemble(plan, sensors, epsilon);
  return integrate_ensemble(ensemble, 0, ensemble.times.size() - 1);
}

Gramian analytic_line_gramian(double t1, double speed, double theta0, double epsilon) {
  if (t1 < 0.0) throw std::invalid_argument("line gramian horizon must be >= 0");
  const double v = speed;
  const double se = epsilon == 0.0 ? 1.0 : std::sin(epsilon) / epsilon;
  const double s0 = std::sin(theta0), c0 = std::cos(theta0);
  const double w13 = -(t1 * t1 * v / 2.0) * se * s0;
  const double w23 = (t1 * t1 * v / 2.0) * se * c0;
  const double w33 = (t1 * t1 * t1 * v * v / 3.0) * se * se;  // cos^2 + sin^2 collapses to 1
  const double w43 = -(t1 * t1 * t1 * v / 3.0) * se * s0;
  const double w53 = (t1 * t1 * t1 * v / 3.0) * se * c0;
  Mat5 w;
  w << t1, 0, w13, t1 * t1 / 2, 0,
       0, t1, w23, 0, t1 * t1 / 2,
       w13, w23, w33, w43, w53,
       t1 * t1 / 2, 0, w43, t1 * t1 * t1 / 3, 0,
       0, t1 * t1 / 2, w53, 0, t1 * t1 * t1 / 3;
  return make_gramian(w, epsilon, 0.0, t1);
}

Gramian analytic_circle_gramian(double t2, double speed, double theta0, double omega0,
                                double epsilon) {
  if (omega0 == 0.0)
    throw std::invalid_argument("circle gramian requires omega0 != 0; use the line form");
  if (t2 < 0.0) throw std::invalid_argument("circle gramian horizon must be >= 0");
  const double v = speed, w0 = omega0;
  const double se = epsilon == 0.0 ? 1.0 : std::sin(epsilon) / epsilon;
  const double s0 = std::sin(theta0), c0 = std::cos(theta0);
  double w13, w23, w33, w43, w53;
  if (std::abs(w0 * t2) >= 0.1) {
    // Antiderivatives of the theta-column output differences against 1 and t.
    const double s1 = std::sin(w0 * t2 + theta0), c1 = std::cos(w0 * t2 + theta0);
    const double a = v * se / w0;
    w13 = a * ((s1 - s0) / w0 - t2 * c0);
    w23 = a * (-(c1 - c0) / w0 - t2 * s0);
    w43 = a * (t2 * s1 / w0 + (c1 - c0) / (w0 * w0) - c0 * t2 * t2 / 2.0);
    w53 = a * (-t2 * c1 / w0 + (s1 - s0) / (w0 * w0) - s0 * t2 * t2 / 2.0);
    w33 = 2.0 * v * v * se * se / (w0 * w0) * (t2 - std::sin(w0 * t2) / w0);
  } else {
    // Small |w0 t2|: the trig antiderivatives cancel catastrophically (1/w0^2
    // amplification), so sum the series of cos(w0 t + theta0) - cos(theta0)
    // integrated against 1 and t. Derivative ladder: cos(theta0 + k pi/2).
    w13 = w23 = w43 = w53 = w33 = 0.0;
    double power = 1.0, factorial = 1.0;  // w0^(k-1) / k!
    for (int k = 1; k <= 24; ++k) {
      factorial *= k;
      const double cos_k = std::cos(theta0 + k * M_PI_2);
      const double sin_k = std::sin(theta0 + k * M_PI_2);
      const double tk1 = std::pow(t2, k + 1), tk2 = tk1 * t2;
      w13 += v * se * cos_k * power * tk1 / (factorial * (k + 1));
      w23 += v * se * sin_k * power * tk1 / (factorial * (k + 1));
      w43 += v * se * cos_k * power * tk2 / (factorial * (k + 2));
      w53 += v * se * sin_k * power * tk2 / (factorial * (k + 2));
      power *= w0;
    }
    // t2 - sin(w0 t2)/w0 expanded in even powers of w0
    double term = t2 * t2 * t2 / 6.0;  // j = 1 term over w0^2, times w0^(2j-2)
    double acc = 0.0;
    for (int j = 1; j <= 12; ++j) {
      acc += term;
      term *= -w0 * w0 * t2 * t2 / ((2.0 * j + 2.0) * (2.0 * j + 3.0));
    }
    w33 = 2.0 * v * v * se * se * acc;
  }
  Mat5 w;
  w << t2, 0, w13, t2 * t2 / 2, 0,
       0, t2, w23, 0, t2 * t2 / 2,
       w13, w23, w33, w43, w53,
       t2 * t2 / 2, 0, w43, t2 * t2 * t2 / 3, 0,
       0, t2 * t2 / 2, w53, 0, t2 * t2 * t2 / 3;
  return make_gramian(w, epsilon, 0.0, t2);
}

Gramian dubins_gramian(const Gramian& line, const Gramian& circle) {
  if (line.epsilon != circle.epsilon)
    throw std::invalid_argument("dubins gramian requires matching perturbation sizes (" +
                                std::to_string(line.epsilon) + " vs " +
                                std::to_string(circle.epsilon) + ")");
  return make_gramian(line.matrix + circle.matrix, line.epsilon, 0.0,
                      (line.t_end - line.t_start) + (circle.t_end - circle.t_start));
}

}  // namespace obs_scout
