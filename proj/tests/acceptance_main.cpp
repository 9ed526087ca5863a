// Acceptance suite: one pass/fail line per criterion, exit 0 only if all hold.
// Usage: acceptance [path-to-scenarios-dir]

#include "obs_scout/ekf.hpp"
#include "obs_scout/gramian.hpp"
#include "obs_scout/observability.hpp"
#include "obs_scout/scenario.hpp"
#include "obs_scout/selection.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace obs_scout;

namespace {

struct Criterion {
  std::string name;
  std::function<bool(std::string&)> run;
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string scenarios_dir = "scenarios";

TrajectoryPlan single_segment_plan(const SegmentPlan& segment, double v, double theta0,
                                   double dt) {
  TrajectoryPlan plan;
  plan.initial = make_state(0, 0, theta0, 0.25, -0.15);
  plan.speed = v;
  plan.dt = dt;
  plan.segments = {segment};
  return plan;
}

std::vector<SensorSpec> gps_only() { return {{"gps", SensorKind::Gps, Vec2::Zero(), 2.0}}; }

// Eq.-style closed form of the line Gramian, re-stated here as the oracle the
// implementation is held against.
Mat5 line_gramian_table(double t1, double v, double th0, double eps) {
  const double se = std::sin(eps) / eps;
  const double s0 = std::sin(th0), c0 = std::cos(th0);
  const double w13 = -(t1 * t1 * v / 2) * se * s0;
  const double w23 = (t1 * t1 * v / 2) * se * c0;
  const double w33 = (t1 * t1 * t1 * v * v / 3) * se * se * (c0 * c0 + s0 * s0);
  const double w43 = -(t1 * t1 * t1 * v / 3) * se * s0;
  const double w53 = (t1 * t1 * t1 * v / 3) * se * c0;
  Mat5 w;
  w << t1, 0, w13, t1 * t1 / 2, 0,
       0, t1, w23, 0, t1 * t1 / 2,
       w13, w23, w33, w43, w53,
       t1 * t1 / 2, 0, w43, t1 * t1 * t1 / 3, 0,
       0, t1 * t1 / 2, w53, 0, t1 * t1 * t1 / 3;
  return w;
}

double rel_to_max(const Mat5& a, const Mat5& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / std::max(scale, 1e-300);
}

bool check_psd(const Gramian& w, double& worst) {
  const double asym = (w.matrix - w.matrix.transpose()).cwiseAbs().maxCoeff();
  const Vec5 eigs = Eigen::SelfAdjointEigenSolver<Mat5>(w.matrix).eigenvalues();
  worst = std::max(worst, asym);
  return asym <= 1e-12 && eigs.minCoeff() >= -1e-10 * std::max(eigs.maxCoeff(), 0.0);
}

Mat5 random_psd(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> rk(1, 5);
  const int r = rk(rng);
  Eigen::MatrixXd b(r, 5);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < 5; ++j) b(i, j) = u(rng);
  return b.transpose() * b;
}

SegmentGramians random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> ps(1, 3), ks(1, 4);
  const int p = ps(rng), k = ks(rng);
  SegmentGramians sg;
  sg.segment_count = k;
  for (int i = 0; i < p; ++i) {
    sg.sensor_ids.push_back("s" + std::to_string(i));
    std::vector<Gramian> row;
    for (int j = 0; j < k; ++j) row.push_back(make_gramian(random_psd(rng), 0.01, j, j + 1));
    sg.gramians.push_back(std::move(row));
  }
  for (int j = 0; j <= k; ++j) sg.boundaries.push_back(j);
  return sg;
}

bool criterion_lemma_corpus(std::string& detail) {
  const double start = now_seconds();
  const std::vector<LemmaOutcome> outcomes = check_lemma_suite();
  const double elapsed = now_seconds() - start;
  int matched = 0;
  std::string failed;
  for (const LemmaOutcome& out : outcomes) {
    if (out.matched)
      ++matched;
    else
      failed += " " + out.name;
  }
  std::ostringstream msg;
  msg << matched << "/" << outcomes.size() << " scenario verdicts matched in " << elapsed
      << " s";
  if (!failed.empty()) msg << "; mismatched:" << failed;
  detail = msg.str();
  return matched == static_cast<int>(outcomes.size()) && elapsed < 10.0;
}

bool criterion_line_gramian(std::string& detail) {
  double worst_table = 0.0, worst_emp = 0.0, worst_zero = 0.0;
  bool rank_ok = true;
  for (double t1 : {0.5, 1.0, 3.0})
    for (double v : {0.5, 1.5})
      for (double th0 : {0.0, 0.8, -2.1})
        for (double eps : {1e-1, 1e-2, 1e-3}) {
          const Gramian w = analytic_line_gramian(t1, v, th0, eps);
          worst_table = std::max(worst_table, rel_to_max(w.matrix, line_gramian_table(t1, v, th0, eps)));
          const EigenReport eig = eigen_analysis(w);
          rank_ok = rank_ok && eig.rank == 4;
          worst_zero = std::max(worst_zero, std::abs(eig.eigenvalues[4]) /
                                                std::max(eig.eigenvalues[0], 1e-300));
        }
  for (double th0 : {0.0, 0.8})
    for (double eps : {1e-1, 1e-2}) {
      const Gramian analytic = analytic_line_gramian(1.0, 1.0, th0, eps);
      const Gramian empirical = empirical_gramian(
          single_segment_plan(SegmentPlan::line(1.0), 1.0, th0, 1e-3), gps_only(), eps);
      worst_emp = std::max(worst_emp, rel_to_max(analytic.matrix, empirical.matrix));
    }
  std::ostringstream msg;
  msg << "table mismatch " << worst_table << ", rank-4 " << (rank_ok ? "ok" : "VIOLATED")
      << ", zero-eig ratio " << worst_zero << ", empirical mismatch " << worst_emp;
  detail = msg.str();
  return worst_table <= 1e-12 && rank_ok && worst_zero <= 1e-10 && worst_emp <= 1e-6;
}

bool criterion_circle_gramian(std::string& detail) {
  double worst_emp = 0.0, worst_limit = 0.0;
  for (double w0 : {0.7, -1.4})
    for (double th0 : {0.0, 0.9}) {
      const Gramian analytic = analytic_circle_gramian(1.0, 1.0, th0, w0, 0.01);
      const Gramian empirical = empirical_gramian(
          single_segment_plan(SegmentPlan::arc(1.0, w0), 1.0, th0, 1e-3), gps_only(), 0.01);
      worst_emp = std::max(worst_emp, rel_to_max(analytic.matrix, empirical.matrix));
    }
  for (double th0 : {0.0, -1.2}) {
    const Gramian circle = analytic_circle_gramian(2.0, 1.2, th0, 1e-4, 0.01);
    const Gramian line = analytic_line_gramian(2.0, 1.2, th0, 0.01);
    worst_limit = std::max(worst_limit, rel_to_max(circle.matrix, line.matrix));
  }
  std::ostringstream msg;
  msg << "empirical mismatch " << worst_emp << ", small-turn-rate gap " << worst_limit;
  detail = msg.str();
  return worst_emp <= 1e-6 && worst_limit <= 1e-3;
}

bool criterion_dubins_gramian(std::string& detail) {
  const Gramian dub = dubins_gramian(analytic_line_gramian(5.0, 1.0, 0.0, 0.01),
                                     analytic_circle_gramian(5.0, 1.0, 0.0, 1.0, 0.01));
  const EigenReport eig = eigen_analysis(dub);
  bool leads_ok = true;
  std::string leads;
  const char* names[5] = {"p1", "p2", "theta", "c1", "c2"};
  for (int j = 0; j < 3; ++j) {
    int lead;
    eig.eigenvectors.col(j).cwiseAbs().maxCoeff(&lead);
    leads_ok = leads_ok && lead >= idx::theta;
    leads += std::string(j ? ", " : "") + names[lead];
  }
  std::ostringstream msg;
  msg << "rank " << eig.rank << ", lambda_min " << eig.lambda_min
      << ", leading eigenvector components: " << leads;
  detail = msg.str();
  return eig.rank == 5 && eig.lambda_min > 0.0 && leads_ok;
}

bool criterion_selection(std::string& detail) {
  std::mt19937_64 rng(9001);
  double worst_gap = 0.0;
  bool order_ok = true;
  for (int n = 0; n < 50; ++n) {
    const SegmentGramians w = random_instance(rng);
    const SelectionPlan exhaustive = optimize_exhaustive(w);
    const SelectionPlan greedy = optimize_greedy(w);
    const RelaxedResult relaxed = optimize_relaxed(w);
    order_ok = order_ok && exhaustive.objective >= greedy.objective - 1e-12 &&
               greedy.objective >= 0.0;
    worst_gap = std::max(worst_gap, exhaustive.objective - relaxed.relaxed_objective);
  }
  bool concave_ok = true;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    const SegmentGramians w = random_instance(rng);
    FractionalPlan s1(w.sensor_count(), std::vector<double>(w.segment_count));
    FractionalPlan s2 = s1, mix = s1;
    for (int i = 0; i < w.sensor_count(); ++i)
      for (int k = 0; k < w.segment_count; ++k) {
        s1[i][k] = u(rng) / w.sensor_count();
        s2[i][k] = u(rng) / w.sensor_count();
      }
    const double alpha = u(rng);
    for (int i = 0; i < w.sensor_count(); ++i)
      for (int k = 0; k < w.segment_count; ++k)
        mix[i][k] = alpha * s1[i][k] + (1 - alpha) * s2[i][k];
    const double lhs = lambda_min(assemble(w, mix));
    const double rhs =
        alpha * lambda_min(assemble(w, s1)) + (1 - alpha) * lambda_min(assemble(w, s2));
    concave_ok = concave_ok && lhs >= rhs - 1e-10;
  }
  std::ostringstream msg;
  msg << "exhaustive >= greedy >= 0 " << (order_ok ? "ok" : "VIOLATED")
      << ", worst relaxed-bound gap " << worst_gap << ", concavity "
      << (concave_ok ? "ok" : "VIOLATED");
  detail = msg.str();
  return order_ok && worst_gap <= 1e-9 && concave_ok;
}

bool criterion_ekf_comparison(std::string& detail) {
  const double start = now_seconds();
  const Scenario scenario = load_scenario(scenarios_dir + "/fig2_analog.json");
  const TrajectoryPlan plan = scenario.plan();
  const std::vector<SensorSpec> sensors = scenario.sensor_specs();
  const SegmentGramians w =
      segment_gramians(plan, sensors, scenario.segment_count, scenario.epsilon);
  const SelectionPlan optimal = scenario.solver == "greedy"    ? optimize_greedy(w)
                                : scenario.solver == "relaxed" ? optimize_relaxed(w).plan
                                                               : optimize_exhaustive(w);
  SelectionPlan naive;
  naive.choice.assign(scenario.segment_count, 0);  // gps is the first sensor
  naive.objective = lambda_min(assemble(w, naive));
  const MonteCarloSummary summary = monte_carlo(plan, sensors, optimal, naive,
                                                scenario.n_trials, scenario.seed,
                                                scenario.ekf_options());
  const double elapsed = now_seconds() - start;
  std::ostringstream msg;
  msg << "mean total RMSE optimal " << summary.mean_total_optimal << " vs naive "
      << summary.mean_total_naive << ", paired win fraction " << summary.win_fraction << " ("
      << summary.n_trials << " trials, " << elapsed << " s)";
  detail = msg.str();
  return summary.mean_total_optimal <= summary.mean_total_naive && elapsed < 60.0;
}

bool criterion_numerical_hygiene(std::string& detail) {
  bool psd_ok = true;
  double worst_asym = 0.0;
  const TrajectoryPlan line = single_segment_plan(SegmentPlan::line(2.0), 1.0, 0.4, 0.01);
  TrajectoryPlan dubins = line;
  dubins.segments.push_back(SegmentPlan::arc(2.0, 0.8));
  std::vector<SensorSpec> sensors{{"gps", SensorKind::Gps, Vec2::Zero(), 2.0},
                                  {"mag", SensorKind::Magnetometer, Vec2::Zero(), 0.21},
                                  {"range", SensorKind::RangeToBeacon, Vec2(8, 8), 1.0}};
  psd_ok = psd_ok && check_psd(empirical_gramian(line, sensors, 0.01), worst_asym);
  psd_ok = psd_ok && check_psd(empirical_gramian(dubins, sensors, 0.01), worst_asym);
  psd_ok = psd_ok && check_psd(analytic_line_gramian(3.0, 1.0, 0.7, 0.01), worst_asym);
  psd_ok = psd_ok && check_psd(analytic_circle_gramian(3.0, 1.0, 0.7, 1.1, 0.01), worst_asym);
  psd_ok = psd_ok && check_psd(dubins_gramian(analytic_line_gramian(3.0, 1.0, 0.7, 0.01),
                                              analytic_circle_gramian(3.0, 1.0, 0.7, 1.1, 0.01)),
                               worst_asym);
  const SegmentGramians sg = segment_gramians(dubins, sensors, 4, 0.01);
  for (const auto& row : sg.gramians)
    for (const Gramian& g : row) psd_ok = psd_ok && check_psd(g, worst_asym);

  // jet gradients against central differences across every measurement formula
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> pos(-8.0, 8.0), ang(-3.0, 3.0);
  const std::vector<SensorSpec> fd_sensors{{"gps", SensorKind::Gps, Vec2::Zero(), 2.0},
                                           {"mag", SensorKind::Magnetometer, Vec2::Zero(), 0.21},
                                           {"range", SensorKind::RangeToBeacon, Vec2(1, -2), 1.0},
                                           {"bearing", SensorKind::BearingToBeacon, Vec2(1, -2), 0.1}};
  int states_checked = 0;
  bool fd_ok = true;
  while (states_checked < 100) {
    const State5 x = make_state(pos(rng), pos(rng), ang(rng), pos(rng) / 8, pos(rng) / 8);
    if ((x.head<2>() - Vec2(1, -2)).norm() < 0.3) continue;
    if (M_PI - std::abs(wrap_angle(x[idx::theta])) < 1e-2) continue;
    ++states_checked;
    const JetVector xj = seed(x, 1);
    for (const SensorSpec& spec : fd_sensors) {
      const std::vector<Jet> jets = jet_measure(spec, xj);
      for (std::size_t c = 0; c < jets.size(); ++c) {
        const Vec5 g = jets[c].gradient();
        for (int i = 0; i < 5; ++i) {
          const double h = 1e-6;
          State5 xp = x, xm = x;
          xp[i] += h;
          xm[i] -= h;
          double diff = measure(spec, xp)[c] - measure(spec, xm)[c];
          if (spec.angular()) diff = wrap_angle(diff);
          const double fd = diff / (2 * h);
          if (std::abs(g[i]) < 1e-9)
            fd_ok = fd_ok && std::abs(fd) < 1e-6;
          else
            fd_ok = fd_ok && std::abs(g[i] - fd) <= 1e-5 * std::abs(g[i]);
        }
      }
    }
  }

  // fourth-order convergence of the RK4 arc flow
  const State5 x0 = make_state(0, 0, 0.3, 0.1, -0.2);
  const Control u{1.0, 1.5};
  const State5 exact = propagate_arc(x0, u.speed, u.turn_rate, 1.0);
  auto rollout = [&](double dt, long n) {
    State5 x = x0;
    for (long i = 0; i < n; ++i) x = step_rk4(x, u, dt);
    return x;
  };
  const double e1 = (rollout(0.1, 10) - exact).cwiseAbs().maxCoeff();
  const double e2 = (rollout(0.05, 20) - exact).cwiseAbs().maxCoeff();
  const double ratio = e1 / e2;
  const bool rk4_ok = ratio > 12.0 && ratio < 20.0;

  std::ostringstream msg;
  msg << "gramians symmetric PSD " << (psd_ok ? "ok" : "VIOLATED") << " (max asymmetry "
      << worst_asym << "), jet-vs-FD gradients " << (fd_ok ? "ok" : "VIOLATED")
      << ", RK4 halving ratio " << ratio;
  detail = msg.str();
  return psd_ok && fd_ok && rk4_ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) scenarios_dir = argv[1];
  const std::vector<Criterion> criteria{
      {"1 lemma corpus verdicts", criterion_lemma_corpus},
      {"2 line gramian closed form", criterion_line_gramian},
      {"3 circle gramian closed form", criterion_circle_gramian},
      {"4 dubins gramian rank and eigenvectors", criterion_dubins_gramian},
      {"5 selection solver ordering and concavity", criterion_selection},
      {"6 ekf optimal-vs-naive comparison", criterion_ekf_comparison},
      {"7 numerical hygiene", criterion_numerical_hygiene},
  };
  int failures = 0;
  for (const Criterion& criterion : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %s: %s\n", ok ? "PASS" : "FAIL", criterion.name.c_str(),
                detail.c_str());
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
