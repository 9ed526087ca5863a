#include "obs_scout/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace obs_scout {

namespace {

using nlohmann::json;

constexpr double kDegToRad = M_PI / 180.0;

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
  throw ScenarioError("scenario validation failed at " + (pointer.empty() ? "/" : pointer) +
                      ": " + what);
}

void reject_unknown_keys(const json& obj, const std::string& pointer,
                         const std::set<std::string>& allowed) {
  for (const auto& item : obj.items())
    if (!allowed.count(item.key())) fail(pointer + "/" + item.key(), "unknown key");
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double require_number(const json& j, const std::string& pointer) {
  if (!j.is_number()) fail(pointer, "expected a number");
  return j.get<double>();
}

double number_or(const json& obj, const char* key, const std::string& pointer, double fallback) {
  const json* j = find(obj, key);
  return j ? require_number(*j, pointer + "/" + key) : fallback;
}

std::string require_string(const json& j, const std::string& pointer) {
  if (!j.is_string()) fail(pointer, "expected a string");
  return j.get<std::string>();
}

}  // namespace

TrajectoryPlan Scenario::plan() const {
  TrajectoryPlan p;
  p.initial = make_state(p1, p2, theta_deg * kDegToRad, c1, c2);
  p.speed = speed;
  p.dt = dt;
  for (const Segment& s : segments) {
    if (s.kind == "line")
      p.segments.push_back(SegmentPlan::line(s.duration));
    else
      p.segments.push_back(SegmentPlan::arc(s.duration, s.turn_rate_deg * kDegToRad));
  }
  return p;
}

std::vector<SensorSpec> Scenario::sensor_specs() const {
  std::vector<SensorSpec> specs;
  for (const Sensor& s : sensors) {
    SensorSpec spec;
    spec.id = s.id;
    spec.kind = s.kind == "gps"          ? SensorKind::Gps
              : s.kind == "magnetometer" ? SensorKind::Magnetometer
              : s.kind == "range"        ? SensorKind::RangeToBeacon
                                         : SensorKind::BearingToBeacon;
    spec.beacon << s.beacon[0], s.beacon[1];
    spec.sigma = spec.angular() ? s.sigma * kDegToRad : s.sigma;
    specs.push_back(std::move(spec));
  }
  return specs;
}

EkfOptions Scenario::ekf_options() const {
  EkfOptions options;
  Vec5 q, p0;
  for (int i = 0; i < 5; ++i) {
    q[i] = q_diag[i];
    const double std_i = i == idx::theta ? init_std[i] * kDegToRad : init_std[i];
    p0[i] = std_i * std_i;
  }
  options.process_noise = q.asDiagonal();
  options.init_cov = p0.asDiagonal();
  options.dt_meas = dt_meas;
  return options;
}

namespace {

Scenario::Segment parse_segment(const json& j, const std::string& pointer) {
  if (!j.is_object()) fail(pointer, "expected an object");
  reject_unknown_keys(j, pointer, {"kind", "duration", "turn_rate_deg"});
  Scenario::Segment seg;
  const json* kind = find(j, "kind");
  if (!kind) fail(pointer + "/kind", "missing required key");
  seg.kind = require_string(*kind, pointer + "/kind");
  if (seg.kind != "line" && seg.kind != "arc")
    fail(pointer + "/kind", "expected \"line\" or \"arc\"");
  const json* duration = find(j, "duration");
  if (!duration) fail(pointer + "/duration", "missing required key");
  seg.duration = require_number(*duration, pointer + "/duration");
  if (!(seg.duration > 0.0)) fail(pointer + "/duration", "must be > 0");
  seg.turn_rate_deg = number_or(j, "turn_rate_deg", pointer, 0.0);
  if (seg.kind == "line" && seg.turn_rate_deg != 0.0)
    fail(pointer + "/turn_rate_deg", "line segments require turn rate 0");
  if (seg.kind == "arc" && seg.turn_rate_deg == 0.0)
    fail(pointer + "/turn_rate_deg", "arc segments require a nonzero turn rate");
  return seg;
}

// Default noise levels per sensor kind (metres or degrees).
double default_sigma(const std::string& kind) {
  if (kind == "gps") return 2.0;
  if (kind == "magnetometer") return 12.0;
  if (kind == "range") return 1.0;
  return 5.0;  // bearing
}

Scenario::Sensor parse_sensor(const json& j, const std::string& pointer, int index) {
  if (!j.is_object()) fail(pointer, "expected an object");
  reject_unknown_keys(j, pointer, {"id", "kind", "sigma", "beacon"});
  Scenario::Sensor sensor;
  const json* kind = find(j, "kind");
  if (!kind) fail(pointer + "/kind", "missing required key");
  sensor.kind = require_string(*kind, pointer + "/kind");
  static const std::set<std::string> kinds{"gps", "magnetometer", "range", "bearing"};
  if (!kinds.count(sensor.kind))
    fail(pointer + "/kind", "expected one of gps, magnetometer, range, bearing");
  const json* id = find(j, "id");
  sensor.id = id ? require_string(*id, pointer + "/id") : sensor.kind + std::to_string(index);
  sensor.sigma = number_or(j, "sigma", pointer, default_sigma(sensor.kind));
  if (!(sensor.sigma > 0.0)) fail(pointer + "/sigma", "must be > 0");
  const bool needs_beacon = sensor.kind == "range" || sensor.kind == "bearing";
  const json* beacon = find(j, "beacon");
  if (needs_beacon && !beacon) fail(pointer + "/beacon", "missing required key");
  if (!needs_beacon && beacon) fail(pointer + "/beacon", "only range/bearing sensors take a beacon");
  if (beacon) {
    if (!beacon->is_array() || beacon->size() != 2)
      fail(pointer + "/beacon", "expected [x, y]");
    sensor.beacon[0] = require_number((*beacon)[0], pointer + "/beacon/0");
    sensor.beacon[1] = require_number((*beacon)[1], pointer + "/beacon/1");
  }
  return sensor;
}

template <std::size_t N>
void parse_array(const json& obj, const char* key, const std::string& pointer,
                 std::array<double, N>& out) {
  const json* j = find(obj, key);
  if (!j) return;
  const std::string p = pointer + "/" + key;
  if (!j->is_array() || j->size() != N)
    fail(p, "expected an array of " + std::to_string(N) + " numbers");
  for (std::size_t i = 0; i < N; ++i)
    out[i] = require_number((*j)[i], p + "/" + std::to_string(i));
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) fail("", "scenario must be a JSON object");
  reject_unknown_keys(doc, "",
                      {"model", "plan", "sensors", "epsilon", "segment_count", "solver", "ekf",
                       "output_dir"});
  Scenario s;

  const json* model = find(doc, "model");
  if (!model) fail("/model", "missing required key");
  s.model = require_string(*model, "/model");
  if (s.model != "dubins" && s.model != "unicycle")
    fail("/model", "expected \"dubins\" or \"unicycle\"");

  const json* plan = find(doc, "plan");
  if (!plan) fail("/plan", "missing required key");
  if (!plan->is_object()) fail("/plan", "expected an object");
  reject_unknown_keys(*plan, "/plan", {"initial", "speed", "dt", "segments"});
  if (const json* initial = find(*plan, "initial")) {
    if (!initial->is_object()) fail("/plan/initial", "expected an object");
    reject_unknown_keys(*initial, "/plan/initial", {"p1", "p2", "theta_deg", "c1", "c2"});
    s.p1 = number_or(*initial, "p1", "/plan/initial", 0.0);
    s.p2 = number_or(*initial, "p2", "/plan/initial", 0.0);
    s.theta_deg = number_or(*initial, "theta_deg", "/plan/initial", 0.0);
    s.c1 = number_or(*initial, "c1", "/plan/initial", 0.0);
    s.c2 = number_or(*initial, "c2", "/plan/initial", 0.0);
  }
  s.speed = number_or(*plan, "speed", "/plan", 1.0);
  if (!(s.speed >= 0.0)) fail("/plan/speed", "must be >= 0");
  s.dt = number_or(*plan, "dt", "/plan", 0.01);
  if (!(s.dt > 0.0)) fail("/plan/dt", "must be > 0");
  const json* segments = find(*plan, "segments");
  if (!segments) fail("/plan/segments", "missing required key");
  if (!segments->is_array() || segments->empty())
    fail("/plan/segments", "expected a nonempty array");
  for (std::size_t i = 0; i < segments->size(); ++i)
    s.segments.push_back(
        parse_segment((*segments)[i], "/plan/segments/" + std::to_string(i)));
  for (std::size_t i = 0; i < s.segments.size(); ++i)
    if (s.dt > s.segments[i].duration)
      fail("/plan/dt", "exceeds duration of segment " + std::to_string(i));

  const json* sensors = find(doc, "sensors");
  if (!sensors) fail("/sensors", "missing required key");
  if (!sensors->is_array() || sensors->empty()) fail("/sensors", "expected a nonempty array");
  for (std::size_t i = 0; i < sensors->size(); ++i)
    s.sensors.push_back(
        parse_sensor((*sensors)[i], "/sensors/" + std::to_string(i), static_cast<int>(i)));
  {
    std::set<std::string> ids;
    for (std::size_t i = 0; i < s.sensors.size(); ++i)
      if (!ids.insert(s.sensors[i].id).second)
        fail("/sensors/" + std::to_string(i) + "/id", "duplicate sensor id");
  }

  s.epsilon = number_or(doc, "epsilon", "", 0.01);
  if (!(s.epsilon > 0.0)) fail("/epsilon", "must be > 0");
  if (const json* k = find(doc, "segment_count")) {
    if (!k->is_number_integer()) fail("/segment_count", "expected an integer");
    s.segment_count = k->get<int>();
    if (s.segment_count < 1) fail("/segment_count", "must be >= 1");
  }
  if (const json* solver = find(doc, "solver")) {
    s.solver = require_string(*solver, "/solver");
    if (s.solver != "exhaustive" && s.solver != "greedy" && s.solver != "relaxed")
      fail("/solver", "expected one of exhaustive, greedy, relaxed");
  }
  if (const json* ekf = find(doc, "ekf")) {
    if (!ekf->is_object()) fail("/ekf", "expected an object");
    reject_unknown_keys(*ekf, "/ekf", {"q_diag", "init_std", "dt_meas", "n_trials", "seed"});
    parse_array(*ekf, "q_diag", "/ekf", s.q_diag);
    for (std::size_t i = 0; i < 5; ++i)
      if (s.q_diag[i] < 0.0) fail("/ekf/q_diag/" + std::to_string(i), "must be >= 0");
    parse_array(*ekf, "init_std", "/ekf", s.init_std);
    for (std::size_t i = 0; i < 5; ++i)
      if (s.init_std[i] < 0.0) fail("/ekf/init_std/" + std::to_string(i), "must be >= 0");
    s.dt_meas = number_or(*ekf, "dt_meas", "/ekf", 0.1);
    if (!(s.dt_meas > 0.0)) fail("/ekf/dt_meas", "must be > 0");
    if (const json* trials = find(*ekf, "n_trials")) {
      if (!trials->is_number_integer()) fail("/ekf/n_trials", "expected an integer");
      s.n_trials = trials->get<int>();
      if (s.n_trials < 1) fail("/ekf/n_trials", "must be >= 1");
    }
    if (const json* seed = find(*ekf, "seed")) {
      if (!seed->is_number_unsigned() && !seed->is_number_integer())
        fail("/ekf/seed", "expected a non-negative integer");
      if (seed->is_number_integer() && seed->get<long long>() < 0)
        fail("/ekf/seed", "expected a non-negative integer");
      s.seed = seed->get<std::uint64_t>();
    }
  }
  if (const json* out = find(doc, "output_dir"))
    s.output_dir = require_string(*out, "/output_dir");

  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // translate the byte offset into a line/column position
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ScenarioError("scenario parse error in " + path + " at line " + std::to_string(line) +
                        ", column " + std::to_string(column) + ": " + e.what());
  }
  return scenario_from_json(doc);
}

nlohmann::ordered_json normalized(const Scenario& s) {
  nlohmann::ordered_json doc;
  doc["model"] = s.model;
  doc["plan"]["initial"] = {{"p1", s.p1}, {"p2", s.p2}, {"theta_deg", s.theta_deg},
                            {"c1", s.c1}, {"c2", s.c2}};
  doc["plan"]["speed"] = s.speed;
  doc["plan"]["dt"] = s.dt;
  doc["plan"]["segments"] = nlohmann::ordered_json::array();
  for (const auto& seg : s.segments) {
    nlohmann::ordered_json j;
    j["kind"] = seg.kind;
    j["duration"] = seg.duration;
    j["turn_rate_deg"] = seg.turn_rate_deg;
    doc["plan"]["segments"].push_back(j);
  }
  doc["sensors"] = nlohmann::ordered_json::array();
  for (const auto& sensor : s.sensors) {
    nlohmann::ordered_json j;
    j["id"] = sensor.id;
    j["kind"] = sensor.kind;
    j["sigma"] = sensor.sigma;
    if (sensor.kind == "range" || sensor.kind == "bearing")
      j["beacon"] = {sensor.beacon[0], sensor.beacon[1]};
    doc["sensors"].push_back(j);
  }
  doc["epsilon"] = s.epsilon;
  doc["segment_count"] = s.segment_count;
  doc["solver"] = s.solver;
  doc["ekf"] = {{"q_diag", s.q_diag}, {"init_std", s.init_std}, {"dt_meas", s.dt_meas},
                {"n_trials", s.n_trials}, {"seed", s.seed}};
  doc["output_dir"] = s.output_dir;
  return doc;
}

}  // namespace obs_scout
