#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace obs_scout {

using Vec2 = Eigen::Matrix<double, 2, 1>;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

/// Full state of the forced unicycle: (p1, p2, theta, c1, c2).
/// Positions in metres, heading in radians (never wrapped in state; only
/// sensor outputs wrap), constant force components in m/s.
using State5 = Vec5;

namespace idx {
inline constexpr int p1 = 0;
inline constexpr int p2 = 1;
inline constexpr int theta = 2;
inline constexpr int c1 = 3;
inline constexpr int c2 = 4;
}  // namespace idx

inline State5 make_state(double p1, double p2, double theta, double c1, double c2) {
  State5 x;
  x << p1, p2, theta, c1, c2;
  return x;
}

/// Control inputs: linear speed u1 [m/s] and turn rate u2 [rad/s].
struct Control {
  double speed = 0.0;
  double turn_rate = 0.0;
};

enum class SegmentKind { Line, Arc };

/// One piece of a Dubins-style plan. Line <=> turn_rate == 0, Arc <=> turn_rate != 0.
struct SegmentPlan {
  SegmentKind kind = SegmentKind::Line;
  double duration = 0.0;   // s, > 0
  double turn_rate = 0.0;  // rad/s, 0 for Line

  static SegmentPlan line(double duration) { return {SegmentKind::Line, duration, 0.0}; }
  static SegmentPlan arc(double duration, double turn_rate) {
    if (turn_rate == 0.0) throw std::invalid_argument("arc segment requires nonzero turn rate");
    return {SegmentKind::Arc, duration, turn_rate};
  }
};

/// A trajectory plan: initial state, constant speed, ordered segments, sample step.
struct TrajectoryPlan {
  State5 initial = State5::Zero();
  double speed = 1.0;  // m/s, fixed per plan
  std::vector<SegmentPlan> segments;
  double dt = 0.01;  // integration/sample step, 0 < dt <= min segment duration

  double total_duration() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.duration;
    return t;
  }
};

/// Throws std::invalid_argument if the plan violates its invariants.
void validate(const TrajectoryPlan& plan);

enum class SensorKind { Gps, Magnetometer, RangeToBeacon, BearingToBeacon };

/// A sensor with its measurement function parameters (beacon location where
/// applicable) and noise standard deviation (metres or radians).
struct SensorSpec {
  std::string id;
  SensorKind kind = SensorKind::Gps;
  Vec2 beacon = Vec2::Zero();  // used by Range/Bearing only
  double sigma = 1.0;          // > 0

  /// Gps yields two scalar channels (p1, p2); every other kind yields one.
  int channel_count() const { return kind == SensorKind::Gps ? 2 : 1; }
  /// True for channels whose output lives on the circle (wrap to (-pi, pi]).
  bool angular() const {
    return kind == SensorKind::Magnetometer || kind == SensorKind::BearingToBeacon;
  }
  bool uses_beacon() const {
    return kind == SensorKind::RangeToBeacon || kind == SensorKind::BearingToBeacon;
  }
};

const char* to_string(SensorKind kind);

}  // namespace obs_scout
