#pragma once

#include "obs_scout/jet.hpp"
#include "obs_scout/types.hpp"

#include <cmath>
#include <vector>

namespace obs_scout {

/// Drift of the constant-speed (Dubins) system: the unforced field plus the
/// speed times the steering field, (v cos(theta) + c1, v sin(theta) + c2, 0, 0, 0).
/// Generic over the state representation so the same formula evaluates on
/// plain states and on jets.
template <typename StateVec>
StateVec dubins_drift(const StateVec& x, double speed) {
  using std::cos;
  using std::sin;
  StateVec dx = x;  // clone shape/order, then overwrite
  dx[idx::p1] = speed * cos(x[idx::theta]) + x[idx::c1];
  dx[idx::p2] = speed * sin(x[idx::theta]) + x[idx::c2];
  dx[idx::theta] = 0.0 * x[idx::theta];
  dx[idx::c1] = 0.0 * x[idx::c1];
  dx[idx::c2] = 0.0 * x[idx::c2];
  return dx;
}

/// Time derivative of the full system under a control (u1, u2).
inline State5 derivative(const State5& x, const Control& u) {
  State5 dx = dubins_drift(x, u.speed);
  dx[idx::theta] = u.turn_rate;
  return dx;
}

inline State5 drift(const State5& x, double speed) { return dubins_drift(x, speed); }

/// Exact flow along a straight segment (turn rate 0) for time t >= 0.
State5 propagate_line(const State5& x, double speed, double t);

/// Exact flow along a constant-turn-rate arc for time t >= 0. Rejects omega == 0.
State5 propagate_arc(const State5& x, double speed, double omega, double t);

/// Classical RK4 step of the controlled dynamics; dt > 0.
State5 step_rk4(const State5& x, const Control& u, double dt);

/// A sampled trajectory: times, states and the piecewise-constant control in
/// effect on the interval starting at each sample.
struct Trajectory {
  std::vector<double> times;
  std::vector<State5> states;
  std::vector<Control> controls;

  std::size_t size() const { return times.size(); }
};

/// Roll the plan out with closed-form propagation. Samples sit at multiples of
/// dt within each segment plus every segment boundary, so later time integrals
/// split cleanly at mode switches.
Trajectory simulate(const TrajectoryPlan& plan);

}  // namespace obs_scout
