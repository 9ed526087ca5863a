#pragma once

#include "obs_scout/ekf.hpp"
#include "obs_scout/types.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace obs_scout {

/// Configuration problem: bad file, bad JSON, schema violation. CLI exit 2.
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A scenario file, kept in its human-facing units (angles in degrees) so the
/// normalized form round-trips bit-exactly; conversions to radians happen in
/// the accessor methods.
struct Scenario {
  struct Segment {
    std::string kind;  // "line" | "arc"
    double duration = 0.0;
    double turn_rate_deg = 0.0;
  };
  struct Sensor {
    std::string id;
    std::string kind;  // "gps" | "magnetometer" | "range" | "bearing"
    double sigma = 0.0;  // metres, or degrees for angular kinds
    std::array<double, 2> beacon{0.0, 0.0};
  };

  std::string model = "dubins";  // "dubins" | "unicycle"
  double p1 = 0.0, p2 = 0.0, theta_deg = 0.0, c1 = 0.0, c2 = 0.0;
  double speed = 1.0;
  double dt = 0.01;
  std::vector<Segment> segments;
  std::vector<Sensor> sensors;
  double epsilon = 0.01;
  int segment_count = 5;
  std::string solver = "exhaustive";
  std::array<double, 5> q_diag{1e-6, 1e-6, 1e-8, 1e-8, 1e-8};
  std::array<double, 5> init_std{2.0, 2.0, 12.0, 0.5, 0.5};  // theta entry in degrees
  double dt_meas = 0.1;
  int n_trials = 100;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  TrajectoryPlan plan() const;
  std::vector<SensorSpec> sensor_specs() const;
  EkfOptions ekf_options() const;
};

/// Parses and validates a scenario file. Parse failures report line/column;
/// schema failures report the JSON-pointer path of the offending value.
Scenario load_scenario(const std::string& path);

/// Same validation applied to an in-memory document.
Scenario scenario_from_json(const nlohmann::json& doc);

/// Normalized form: every field explicit, fixed key order.
nlohmann::ordered_json normalized(const Scenario& scenario);

struct DispatchOptions {
  std::optional<std::string> output_dir;
  std::optional<std::string> solver;
  std::optional<std::uint64_t> seed;
  bool svg = false;
};

/// Runs one subcommand pipeline (rank | gramian | select | ekf | lemmas),
/// writing its artifacts into the output directory. Returns the process exit
/// code: 0 success, 1 computation failure (message on stderr).
int dispatch(const std::string& command, const Scenario& scenario, const DispatchOptions& options);

}  // namespace obs_scout
