#include "obs_scout/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace obs_scout {

void validate(const TrajectoryPlan& plan) {
  if (plan.segments.empty()) throw std::invalid_argument("trajectory plan has no segments");
  if (!(plan.dt > 0.0)) throw std::invalid_argument("trajectory plan requires dt > 0");
  if (!(plan.speed >= 0.0) || !std::isfinite(plan.speed))
    throw std::invalid_argument("trajectory plan requires finite speed >= 0");
  for (std::size_t i = 0; i < plan.segments.size(); ++i) {
    const SegmentPlan& s = plan.segments[i];
    if (!(s.duration > 0.0))
      throw std::invalid_argument("segment " + std::to_string(i) + " has non-positive duration");
    const bool is_line = s.kind == SegmentKind::Line;
    if (is_line != (s.turn_rate == 0.0))
      throw std::invalid_argument("segment " + std::to_string(i) +
                                  ": line requires turn_rate 0, arc requires nonzero");
    if (plan.dt > s.duration)
      throw std::invalid_argument("dt exceeds duration of segment " + std::to_string(i));
  }
}

State5 propagate_line(const State5& x, double speed, double t) {
  if (t < 0.0) throw std::invalid_argument("propagation time must be >= 0");
  State5 y = x;
  y[idx::p1] += (speed * std::cos(x[idx::theta]) + x[idx::c1]) * t;
  y[idx::p2] += (speed * std::sin(x[idx::theta]) + x[idx::c2]) * t;
  return y;
}

State5 propagate_arc(const State5& x, double speed, double omega, double t) {
  if (omega == 0.0)
    throw std::invalid_argument("propagate_arc requires omega != 0; use propagate_line");
  if (t < 0.0) throw std::invalid_argument("propagation time must be >= 0");
  const double th0 = x[idx::theta];
  State5 y = x;
  y[idx::p1] += x[idx::c1] * t + speed / omega * (std::sin(omega * t + th0) - std::sin(th0));
  y[idx::p2] += x[idx::c2] * t - speed / omega * (std::cos(omega * t + th0) - std::cos(th0));
  y[idx::theta] += omega * t;
  return y;
}

State5 step_rk4(const State5& x, const Control& u, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_rk4 requires dt > 0");
  const State5 k1 = derivative(x, u);
  const State5 k2 = derivative(x + 0.5 * dt * k1, u);
  const State5 k3 = derivative(x + 0.5 * dt * k2, u);
  const State5 k4 = derivative(x + dt * k3, u);
  return x + dt / 6.0 * (k1 + 2.0 * (k2 + k3) + k4);
}

namespace {

State5 propagate_segment(const State5& x, double speed, const SegmentPlan& seg, double t) {
  return seg.kind == SegmentKind::Line ? propagate_line(x, speed, t)
                                       : propagate_arc(x, speed, seg.turn_rate, t);
}

}  // namespace

Trajectory simulate(const TrajectoryPlan& plan) {
  validate(plan);
  Trajectory traj;
  State5 x = plan.initial;
  double t0 = 0.0;
  traj.times.push_back(0.0);
  traj.states.push_back(x);
  std::vector<std::size_t> segment_end;  // sample index of each segment's end boundary
  for (const SegmentPlan& seg : plan.segments) {
    const double tol = 1e-9 * plan.dt;
    for (long k = 1; k * plan.dt < seg.duration - tol; ++k) {
      const double s = k * plan.dt;
      traj.times.push_back(t0 + s);
      traj.states.push_back(propagate_segment(x, plan.speed, seg, s));
    }
    traj.times.push_back(t0 + seg.duration);
    traj.states.push_back(propagate_segment(x, plan.speed, seg, seg.duration));
    segment_end.push_back(traj.times.size() - 1);
    x = traj.states.back();
    t0 += seg.duration;
  }
  // Piecewise-constant control: each sample carries the control of the
  // interval that starts there; the final sample keeps the last segment's.
  traj.controls.resize(traj.size());
  std::size_t lo = 0;
  for (std::size_t j = 0; j < plan.segments.size(); ++j) {
    const Control u{plan.speed, plan.segments[j].turn_rate};
    for (std::size_t i = lo; i < segment_end[j]; ++i) traj.controls[i] = u;
    lo = segment_end[j];
  }
  traj.controls.back() = Control{plan.speed, plan.segments.back().turn_rate};
  return traj;
}

}  // namespace obs_scout
