#pragma once

#include "obs_scout/jet.hpp"
#include "obs_scout/types.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace obs_scout {

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a > M_PI) a -= 2.0 * M_PI;
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

namespace detail {

template <typename StateVec>
auto range_channel(const StateVec& x, const Vec2& beacon) {
  using std::sqrt;
  auto d1 = x[idx::p1] - beacon[0];
  auto d2 = x[idx::p2] - beacon[1];
  return sqrt(d1 * d1 + d2 * d2);
}

template <typename StateVec>
auto bearing_channel(const StateVec& x, const Vec2& beacon) {
  using std::atan2;
  return atan2(x[idx::p2] - beacon[1], x[idx::p1] - beacon[0]) - x[idx::theta];
}

inline void require_off_beacon(const SensorSpec& spec, double p1, double p2) {
  const double r = std::hypot(p1 - spec.beacon[0], p2 - spec.beacon[1]);
  if (r < 1e-12)
    throw std::domain_error("sensor '" + spec.id +
                            "' measurement singular: state coincides with its beacon");
}

}  // namespace detail

/// Noise-free measurement channels. Angular channels wrap to (-pi, pi]; the
/// state itself is never wrapped.
std::vector<double> measure(const SensorSpec& spec, const State5& x);

/// measure() plus independent zero-mean Gaussian noise of std sigma per
/// channel; angular channels are re-wrapped after noising. The caller owns the
/// generator, so draws are reproducible.
std::vector<double> measure_noisy(const SensorSpec& spec, const State5& x, std::mt19937_64& rng);

/// The same measurement formulas evaluated in jet arithmetic: the order-0 part
/// equals measure() (angular constants re-wrapped; wrapping has zero
/// derivative, so all higher coefficients are untouched).
std::vector<Jet> jet_measure(const SensorSpec& spec, const JetVector& x);

}  // namespace obs_scout
