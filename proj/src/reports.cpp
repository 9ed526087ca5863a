#include "obs_scout/reports.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace obs_scout {

namespace {

const char* kStateNames[5] = {"p1", "p2", "theta", "c1", "c2"};

std::string sensor_label(int choice, const std::vector<SensorSpec>& sensors) {
  return choice == kNoSensor ? "none" : sensors[choice].id;
}

std::vector<std::string> schedule_labels(const SelectionPlan& plan,
                                         const std::vector<SensorSpec>& sensors) {
  std::vector<std::string> labels;
  for (int choice : plan.choice) labels.push_back(sensor_label(choice, sensors));
  return labels;
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

nlohmann::ordered_json rank_report_json(const RankReport& report, ControlMode mode,
                                        const State5& state) {
  nlohmann::ordered_json doc;
  doc["verdict"] = report.observable ? "observable" : "unobservable";
  doc["rank"] = report.rank;
  doc["tolerance"] = report.tolerance;
  doc["lie_depth"] = report.lie_depth;
  doc["mode"] = to_string(mode);
  doc["state"] = std::vector<double>(state.data(), state.data() + 5);
  doc["singular_values"] =
      std::vector<double>(report.singular_values.data(), report.singular_values.data() + 5);
  doc["null_space"] = nlohmann::ordered_json::array();
  for (const Vec5& v : report.null_basis)
    doc["null_space"].push_back(std::vector<double>(v.data(), v.data() + 5));
  return doc;
}

std::string lemma_suite_csv(const std::vector<LemmaOutcome>& outcomes) {
  std::string csv = csv_line({"scenario", "expected", "actual", "min_singular_value"});
  for (const LemmaOutcome& out : outcomes)
    csv += csv_line({out.name, to_string(out.expected), to_string(out.actual),
                     format_double(out.min_sigma)});
  return csv;
}

nlohmann::ordered_json gramian_json(const Gramian& w, const EigenReport& eig) {
  nlohmann::ordered_json doc;
  doc["epsilon"] = w.epsilon;
  doc["horizon"] = {w.t_start, w.t_end};
  doc["states"] = kStateNames;
  doc["matrix"] = nlohmann::ordered_json::array();
  for (int r = 0; r < 5; ++r) {
    std::vector<double> row(5);
    for (int c = 0; c < 5; ++c) row[c] = w.matrix(r, c);
    doc["matrix"].push_back(row);
  }
  doc["eigenvalues"] =
      std::vector<double>(eig.eigenvalues.data(), eig.eigenvalues.data() + 5);
  doc["eigenvectors"] = nlohmann::ordered_json::array();
  for (int j = 0; j < 5; ++j) {
    std::vector<double> col(5);
    for (int r = 0; r < 5; ++r) col[r] = eig.eigenvectors(r, j);
    doc["eigenvectors"].push_back(col);
  }
  doc["lambda_min"] = eig.lambda_min;
  doc["rank"] = eig.rank;
  return doc;
}

std::string gramian_csv(const Gramian& w, const EigenReport& eig) {
  std::string csv = csv_line({"block", "index", "p1", "p2", "theta", "c1", "c2"});
  auto row = [&](const char* block, int index, auto value_of) {
    std::vector<std::string> cells{block, std::to_string(index)};
    for (int c = 0; c < 5; ++c) cells.push_back(format_double(value_of(c)));
    csv += csv_line(cells);
  };
  for (int r = 0; r < 5; ++r)
    row("matrix", r, [&](int c) { return w.matrix(r, c); });
  row("eigenvalues", 0, [&](int c) { return eig.eigenvalues[c]; });
  for (int j = 0; j < 5; ++j)
    row("eigenvector", j, [&](int c) { return eig.eigenvectors(c, j); });
  return csv;
}

nlohmann::ordered_json selection_json(const SegmentGramians& w, const SelectionPlan& plan,
                                      const std::string& solver, double relaxed_objective) {
  nlohmann::ordered_json doc;
  doc["solver"] = solver;
  doc["objective_lambda_min"] = plan.objective;
  if (solver == "relaxed") doc["relaxed_objective"] = relaxed_objective;
  doc["segments"] = nlohmann::ordered_json::array();
  for (int k = 0; k < w.segment_count; ++k) {
    nlohmann::ordered_json seg;
    seg["segment"] = k;
    seg["t_start"] = w.boundaries[k];
    seg["t_end"] = w.boundaries[k + 1];
    if (plan.choice[k] == kNoSensor)
      seg["sensor"] = nullptr;
    else
      seg["sensor"] = w.sensor_ids[plan.choice[k]];
    doc["segments"].push_back(seg);
  }
  return doc;
}

std::string relaxed_trace_csv(const std::vector<double>& trace) {
  std::string csv = csv_line({"iteration", "objective"});
  for (std::size_t i = 0; i < trace.size(); ++i)
    csv += csv_line({std::to_string(i + 1), format_double(trace[i])});
  return csv;
}

std::string ekf_trial_csv(const TrialResult& trial, const std::vector<SensorSpec>& sensors) {
  std::vector<std::string> header{"t"};
  for (const char* group : {"truth", "est", "err", "cov"})
    for (const char* state : kStateNames) header.push_back(std::string(group) + "_" + state);
  header.push_back("active_sensor");
  std::string csv = csv_line(header);
  for (std::size_t i = 0; i < trial.times.size(); ++i) {
    std::vector<std::string> cells{format_double(trial.times[i])};
    for (int s = 0; s < 5; ++s) cells.push_back(format_double(trial.truth[i][s]));
    for (int s = 0; s < 5; ++s) cells.push_back(format_double(trial.estimate[i][s]));
    for (int s = 0; s < 5; ++s) cells.push_back(format_double(trial.error[i][s]));
    for (int s = 0; s < 5; ++s) cells.push_back(format_double(trial.cov_diagonal[i][s]));
    cells.push_back(sensor_label(trial.active_sensor[i], sensors));
    csv += csv_line(cells);
  }
  return csv;
}

nlohmann::ordered_json ekf_summary_json(const MonteCarloSummary& summary,
                                        const SelectionPlan& optimal, const SelectionPlan& naive,
                                        const std::vector<SensorSpec>& sensors,
                                        std::uint64_t seed) {
  auto vec = [](const Vec5& v) { return std::vector<double>(v.data(), v.data() + 5); };
  nlohmann::ordered_json doc;
  doc["n_trials"] = summary.n_trials;
  doc["seed"] = seed;
  doc["states"] = kStateNames;
  doc["mean_rmse"] = {{"optimal", vec(summary.mean_rmse_optimal)},
                      {"naive", vec(summary.mean_rmse_naive)}};
  doc["q95_rmse"] = {{"optimal", vec(summary.q95_rmse_optimal)},
                     {"naive", vec(summary.q95_rmse_naive)}};
  doc["mean_total_rmse"] = {{"optimal", summary.mean_total_optimal},
                            {"naive", summary.mean_total_naive}};
  doc["win_fraction"] = summary.win_fraction;
  doc["schedule"] = {{"optimal", schedule_labels(optimal, sensors)},
                     {"naive", schedule_labels(naive, sensors)}};
  doc["objective_lambda_min"] = {{"optimal", optimal.objective}, {"naive", naive.objective}};
  return doc;
}

}  // namespace obs_scout
