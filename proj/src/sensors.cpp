#include "obs_scout/sensors.hpp"

namespace obs_scout {

const char* to_string(SensorKind kind) {
  switch (kind) {
    case SensorKind::Gps: return "gps";
    case SensorKind::Magnetometer: return "magnetometer";
    case SensorKind::RangeToBeacon: return "range";
    case SensorKind::BearingToBeacon: return "bearing";
  }
  return "?";
}

std::vector<double> measure(const SensorSpec& spec, const State5& x) {
  switch (spec.kind) {
    case SensorKind::Gps:
      return {x[idx::p1], x[idx::p2]};
    case SensorKind::Magnetometer:
      return {wrap_angle(x[idx::theta])};
    case SensorKind::RangeToBeacon:
      detail::require_off_beacon(spec, x[idx::p1], x[idx::p2]);
      return {detail::range_channel(x, spec.beacon)};
    case SensorKind::BearingToBeacon:
      detail::require_off_beacon(spec, x[idx::p1], x[idx::p2]);
      return {wrap_angle(detail::bearing_channel(x, spec.beacon))};
  }
  throw std::logic_error("unknown sensor kind");
}

std::vector<double> measure_noisy(const SensorSpec& spec, const State5& x, std::mt19937_64& rng) {
  std::vector<double> z = measure(spec, x);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (double& zi : z) {
    zi += spec.sigma * noise(rng);
    if (spec.angular()) zi = wrap_angle(zi);
  }
  return z;
}

namespace {

// Shift the constant coefficient onto (-pi, pi]; derivatives are untouched.
Jet wrap_constant(Jet j) {
  j += wrap_angle(j.value()) - j.value();
  return j;
}

}  // namespace

std::vector<Jet> jet_measure(const SensorSpec& spec, const JetVector& x) {
  switch (spec.kind) {
    case SensorKind::Gps:
      return {x[idx::p1], x[idx::p2]};
    case SensorKind::Magnetometer:
      return {wrap_constant(x[idx::theta])};
    case SensorKind::RangeToBeacon:
      detail::require_off_beacon(spec, x[idx::p1].value(), x[idx::p2].value());
      return {detail::range_channel(x, spec.beacon)};
    case SensorKind::BearingToBeacon:
      detail::require_off_beacon(spec, x[idx::p1].value(), x[idx::p2].value());
      return {wrap_constant(detail::bearing_channel(x, spec.beacon))};
  }
  throw std::logic_error("unknown sensor kind");
}

}  // namespace obs_scout
