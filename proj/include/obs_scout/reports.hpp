#pragma once

#include "obs_scout/ekf.hpp"
#include "obs_scout/gramian.hpp"
#include "obs_scout/observability.hpp"
#include "obs_scout/selection.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace obs_scout {

/// Doubles rendered with 17 significant digits (lossless round-trip).
std::string format_double(double value);

/// One CSV line from already-formatted cells.
std::string csv_line(const std::vector<std::string>& cells);

void write_text_file(const std::string& path, const std::string& content);

nlohmann::ordered_json rank_report_json(const RankReport& report, ControlMode mode,
                                        const State5& state);
std::string lemma_suite_csv(const std::vector<LemmaOutcome>& outcomes);
nlohmann::ordered_json gramian_json(const Gramian& w, const EigenReport& eig);
std::string gramian_csv(const Gramian& w, const EigenReport& eig);
nlohmann::ordered_json selection_json(const SegmentGramians& w, const SelectionPlan& plan,
                                      const std::string& solver, double relaxed_objective);
std::string relaxed_trace_csv(const std::vector<double>& trace);
std::string ekf_trial_csv(const TrialResult& trial, const std::vector<SensorSpec>& sensors);
nlohmann::ordered_json ekf_summary_json(const MonteCarloSummary& summary,
                                        const SelectionPlan& optimal, const SelectionPlan& naive,
                                        const std::vector<SensorSpec>& sensors,
                                        std::uint64_t seed);

/// Bar chart of per-coordinate eigenvector magnitudes, one group per
/// eigenvalue (descending).
std::string eigenvector_svg(const EigenReport& eig);

/// Error and covariance traces per state with the active-sensor track.
std::string ekf_traces_svg(const TrialResult& trial, const std::vector<SensorSpec>& sensors);

}  // namespace obs_scout
