#include "obs_scout/observability.hpp"
#include "obs_scout/reports.hpp"
#include "obs_scout/scenario.hpp"

#include <filesystem>
#include <iostream>

namespace obs_scout {

namespace {

struct RunContext {
  Scenario scenario;
  std::string out_dir;
  bool svg = false;
};

void emit_json(const RunContext& ctx, const std::string& name, const nlohmann::ordered_json& doc) {
  write_text_file(ctx.out_dir + "/" + name, doc.dump(2) + "\n");
}

// Control activity for the rank test, derived from the scenario: a unicycle
// plan exercises the speed input, a Dubins plan with any arc exercises the
// turn input, a straight-only Dubins plan is drift-only.
ControlMode rank_mode(const Scenario& s) {
  if (s.model == "unicycle") return ControlMode::SpeedVarying;
  for (const auto& seg : s.segments)
    if (seg.kind == "arc") return ControlMode::TurnActive;
  return ControlMode::NoControl;
}

int run_rank(const RunContext& ctx) {
  const Scenario& s = ctx.scenario;
  const TrajectoryPlan plan = s.plan();
  const ControlMode mode = rank_mode(s);
  const std::vector<ChannelFn> channels = sensor_channels(s.sensor_specs());
  const Eigen::MatrixXd d_obs = build_codistribution(
      s.model == "unicycle" ? ModelFamily::Unicycle : ModelFamily::Dubins, s.speed, channels,
      mode, plan.initial);
  const RankReport report = numerical_rank(d_obs);
  emit_json(ctx, "rank_report.json", rank_report_json(report, mode, plan.initial));
  std::cout << "verdict: " << (report.observable ? "Observable" : "Unobservable") << " (rank "
            << report.rank << "/5, mode " << to_string(mode) << ")\n";
  return 0;
}

int run_lemmas(const RunContext& ctx) {
  const std::vector<LemmaOutcome> outcomes = check_lemma_suite();
  write_text_file(ctx.out_dir + "/lemma_suite.csv", lemma_suite_csv(outcomes));
  bool all_matched = true;
  for (const LemmaOutcome& out : outcomes) {
    std::cout << (out.matched ? "[ ok ] " : "[FAIL] ") << out.name << ": expected "
              << to_string(out.expected) << ", got " << to_string(out.actual) << " (rank "
              << out.min_rank << ".." << out.max_rank << ")\n";
    all_matched = all_matched && out.matched;
  }
  if (!all_matched) std::cerr << "lemma suite: verdict mismatch\n";
  return all_matched ? 0 : 1;
}

int run_gramian(const RunContext& ctx) {
  const Scenario& s = ctx.scenario;
  const Gramian w = empirical_gramian(s.plan(), s.sensor_specs(), s.epsilon);
  const EigenReport eig = eigen_analysis(w);
  emit_json(ctx, "gramian.json", gramian_json(w, eig));
  write_text_file(ctx.out_dir + "/gramian.csv", gramian_csv(w, eig));
  if (ctx.svg) write_text_file(ctx.out_dir + "/eigvec.svg", eigenvector_svg(eig));
  std::cout << "gramian over [" << w.t_start << ", " << w.t_end
            << "] s: lambda_min = " << eig.lambda_min << ", rank " << eig.rank << "/5\n";
  return 0;
}

SelectionPlan solve(const SegmentGramians& w, const std::string& solver,
                    double* relaxed_objective, std::vector<double>* trace) {
  if (solver == "exhaustive") return optimize_exhaustive(w);
  if (solver == "greedy") return optimize_greedy(w);
  RelaxedResult result = optimize_relaxed(w);
  if (relaxed_objective) *relaxed_objective = result.relaxed_objective;
  if (trace) *trace = std::move(result.trace);
  return result.plan;
}

int run_select(const RunContext& ctx) {
  const Scenario& s = ctx.scenario;
  const SegmentGramians w =
      segment_gramians(s.plan(), s.sensor_specs(), s.segment_count, s.epsilon);
  double relaxed_objective = 0.0;
  std::vector<double> trace;
  const SelectionPlan plan = solve(w, s.solver, &relaxed_objective, &trace);
  emit_json(ctx, "selection.json", selection_json(w, plan, s.solver, relaxed_objective));
  if (s.solver == "relaxed")
    write_text_file(ctx.out_dir + "/relaxed_trace.csv", relaxed_trace_csv(trace));
  std::cout << "selected schedule (" << s.solver << "): lambda_min = " << plan.objective << "\n";
  return 0;
}

SelectionPlan naive_gps_plan(const SegmentGramians& w, const std::vector<SensorSpec>& sensors) {
  int gps = -1;
  for (std::size_t i = 0; i < sensors.size(); ++i)
    if (sensors[i].kind == SensorKind::Gps) {
      gps = static_cast<int>(i);
      break;
    }
  if (gps < 0)
    throw std::runtime_error("the naive baseline activates GPS in every segment, "
                             "but the scenario lists no gps sensor");
  SelectionPlan plan;
  plan.choice.assign(w.segment_count, gps);
  plan.objective = lambda_min(assemble(w, plan));
  return plan;
}

int run_ekf(const RunContext& ctx) {
  const Scenario& s = ctx.scenario;
  const TrajectoryPlan plan = s.plan();
  const std::vector<SensorSpec> sensors = s.sensor_specs();
  const SegmentGramians w = segment_gramians(plan, sensors, s.segment_count, s.epsilon);
  const SelectionPlan optimal = solve(w, s.solver, nullptr, nullptr);
  const SelectionPlan naive = naive_gps_plan(w, sensors);
  const EkfOptions options = s.ekf_options();

  const MonteCarloSummary summary =
      monte_carlo(plan, sensors, optimal, naive, s.n_trials, s.seed, options);
  const TrialResult trial = run_trial(plan, optimal, sensors, s.seed, options);

  write_text_file(ctx.out_dir + "/ekf_trial.csv", ekf_trial_csv(trial, sensors));
  emit_json(ctx, "ekf_summary.json", ekf_summary_json(summary, optimal, naive, sensors, s.seed));
  if (ctx.svg) write_text_file(ctx.out_dir + "/ekf_traces.svg", ekf_traces_svg(trial, sensors));
  std::cout << "mean total RMSE: optimal " << summary.mean_total_optimal << " vs naive "
            << summary.mean_total_naive << " (win fraction " << summary.win_fraction << ")\n";
  return 0;
}

}  // namespace

int dispatch(const std::string& command, const Scenario& scenario,
             const DispatchOptions& options) {
  RunContext ctx;
  ctx.scenario = scenario;
  if (options.solver) ctx.scenario.solver = *options.solver;
  if (options.seed) ctx.scenario.seed = *options.seed;
  ctx.out_dir = options.output_dir.value_or(scenario.output_dir);
  ctx.scenario.output_dir = ctx.out_dir;  // the echo reflects the effective config
  ctx.svg = options.svg;

  try {
    std::filesystem::create_directories(ctx.out_dir);
    emit_json(ctx, "scenario_normalized.json", normalized(ctx.scenario));
    if (command == "rank") return run_rank(ctx);
    if (command == "lemmas") return run_lemmas(ctx);
    if (command == "gramian") return run_gramian(ctx);
    if (command == "select") return run_select(ctx);
    if (command == "ekf") return run_ekf(ctx);
    std::cerr << "unknown subcommand: " << command << "\n";
    return 2;
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace obs_scout
