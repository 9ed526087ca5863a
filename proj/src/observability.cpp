#include "obs_scout/observability.hpp"

#include "obs_scout/dynamics.hpp"

#include <Eigen/SVD>

#include <random>

namespace obs_scout {

const char* to_string(ControlMode mode) {
  switch (mode) {
    case ControlMode::NoControl: return "no_control";
    case ControlMode::TurnActive: return "turn_active";
    case ControlMode::SpeedVarying: return "speed_varying";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Observable: return "observable";
    case Verdict::Unobservable: return "unobservable";
    case Verdict::Recorded: return "recorded";
  }
  return "?";
}

std::vector<ChannelFn> sensor_channels(const std::vector<SensorSpec>& sensors) {
  std::vector<ChannelFn> channels;
  for (const SensorSpec& spec : sensors)
    for (int c = 0; c < spec.channel_count(); ++c)
      channels.push_back([spec, c](const JetVector& x) { return jet_measure(spec, x)[c]; });
  return channels;
}

namespace {

JetVector field_zero_tail(Jet j0, Jet j1, int order) {
  JetVector f;
  f[0] = std::move(j0);
  f[1] = std::move(j1);
  for (int i = 2; i < Jet::kVars; ++i) f[i] = Jet::constant(0.0, order);
  return f;
}

// Drift for the chosen family: Dubins has (v cos + c1, v sin + c2, 0, 0, 0),
// the bare unicycle drifts on the forces alone.
JetVector drift_field(ModelFamily family, double speed, const JetVector& x) {
  const int order = x[0].order();
  if (family == ModelFamily::Dubins)
    return field_zero_tail(speed * cos(x[idx::theta]) + x[idx::c1],
                           speed * sin(x[idx::theta]) + x[idx::c2], order);
  return field_zero_tail(x[idx::c1], x[idx::c2], order);
}

// Input field for the mixed Lie-derivative chains of the active mode.
JetVector input_field(ControlMode mode, const JetVector& x) {
  const int order = x[0].order();
  if (mode == ControlMode::SpeedVarying)  // steering field f1 = (cos, sin, 0, 0, 0)
    return field_zero_tail(cos(x[idx::theta]), sin(x[idx::theta]), order);
  JetVector f2;  // turn field f2 = (0, 0, 1, 0, 0)
  for (int i = 0; i < Jet::kVars; ++i)
    f2[i] = Jet::constant(i == idx::theta ? 1.0 : 0.0, order);
  return f2;
}

}  // namespace

Eigen::MatrixXd build_codistribution(ModelFamily family, double speed,
                                     const std::vector<ChannelFn>& channels, ControlMode mode,
                                     const State5& state, int depth) {
  if (depth < 1) throw std::invalid_argument("codistribution depth must be >= 1");
  const int order = depth + 1;
  const JetVector x = seed(state, order);
  const JetVector f0 = drift_field(family, speed, x);
  const bool mixed = mode != ControlMode::NoControl;
  const JetVector fi = mixed ? input_field(mode, x) : JetVector{};

  const int rows_per_channel = 1 + depth + (mixed ? depth : 0);
  Eigen::MatrixXd d_obs(static_cast<int>(channels.size()) * rows_per_channel, 5);
  int row = 0;
  for (const ChannelFn& channel : channels) {
    Jet g = channel(x);
    d_obs.row(row++) = g.gradient().transpose();
    if (mixed) d_obs.row(row++) = lie(g, fi).gradient().transpose();
    for (int k = 1; k <= depth; ++k) {
      g = lie(g, f0);
      d_obs.row(row++) = g.gradient().transpose();
      if (mixed && k < depth) d_obs.row(row++) = lie(g, fi).gradient().transpose();
    }
  }
  return d_obs;
}

RankReport numerical_rank(const Eigen::MatrixXd& matrix, double tol_rel) {
  if (matrix.rows() == 0 || matrix.cols() != 5)
    throw std::invalid_argument("numerical_rank expects a nonempty rows x 5 matrix");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix, Eigen::ComputeFullV);
  RankReport report;
  report.tolerance = tol_rel;
  const auto& sv = svd.singularValues();
  for (int i = 0; i < sv.size() && i < 5; ++i) report.singular_values[i] = sv[i];
  const double sigma_max = report.singular_values[0];
  if (sigma_max > 0.0)
    for (int i = 0; i < 5; ++i)
      if (report.singular_values[i] > tol_rel * sigma_max) ++report.rank;
  for (int i = report.rank; i < 5; ++i) report.null_basis.push_back(svd.matrixV().col(i));
  report.observable = report.rank == 5;
  return report;
}

namespace {

ChannelFn pick(int i) {
  return [i](const JetVector& x) { return x[i]; };
}

ChannelFn range_fn(Vec2 beacon) {
  SensorSpec spec{"range", SensorKind::RangeToBeacon, beacon, 1.0};
  return [spec](const JetVector& x) { return jet_measure(spec, x)[0]; };
}

}  // namespace

std::vector<LemmaScenario> lemma_corpus() {
  const Vec2 origin = Vec2::Zero();
  std::vector<LemmaScenario> corpus;
  corpus.push_back({"heading_only_drift", "h = theta only; positions unmeasured",
                    ModelFamily::Dubins, ControlMode::NoControl, {pick(idx::theta)},
                    Verdict::Unobservable});
  corpus.push_back({"heading_only_turning", "h = theta only with turning control",
                    ModelFamily::Dubins, ControlMode::TurnActive, {pick(idx::theta)},
                    Verdict::Unobservable});
  corpus.push_back({"single_position_drift", "single output h = p1, no control",
                    ModelFamily::Dubins, ControlMode::NoControl, {pick(idx::p1)},
                    Verdict::Unobservable});
  corpus.push_back({"quartic_single_output_probe", "single output h = p1^4 + p2, no control (recorded)",
                    ModelFamily::Dubins, ControlMode::NoControl,
                    {[](const JetVector& x) {
                      const Jet q = x[idx::p1] * x[idx::p1];
                      return q * q + x[idx::p2];
                    }},
                    Verdict::Recorded});
  corpus.push_back({"heading_blind_drift", "h = (p1, p2, range), heading unmeasured, no control",
                    ModelFamily::Dubins, ControlMode::NoControl,
                    {pick(idx::p1), pick(idx::p2), range_fn(origin)}, Verdict::Unobservable});
  corpus.push_back({"positions_only_drift", "h = (p1, p2), no control",
                    ModelFamily::Dubins, ControlMode::NoControl, {pick(idx::p1), pick(idx::p2)},
                    Verdict::Unobservable});
  corpus.push_back({"bilinear_position_with_heading", "h = (p1*p2, theta), no control",
                    ModelFamily::Dubins, ControlMode::NoControl,
                    {[](const JetVector& x) { return x[idx::p1] * x[idx::p2]; },
                     pick(idx::theta)},
                    Verdict::Unobservable});
  corpus.push_back({"position_heading_no_crosstrack", "h = (p1, theta), no control",
                    ModelFamily::Dubins, ControlMode::NoControl,
                    {pick(idx::p1), pick(idx::theta)}, Verdict::Unobservable});
  corpus.push_back({"range_only_drift", "h = range only, no control",
                    ModelFamily::Dubins, ControlMode::NoControl, {range_fn(origin)},
                    Verdict::Unobservable});
  corpus.push_back({"positions_and_heading_drift", "h = (p1, p2, theta), no control",
                    ModelFamily::Dubins, ControlMode::NoControl,
                    {pick(idx::p1), pick(idx::p2), pick(idx::theta)}, Verdict::Observable});
  corpus.push_back({"positions_turning", "h = (p1, p2) with turning control",
                    ModelFamily::Dubins, ControlMode::TurnActive, {pick(idx::p1), pick(idx::p2)},
                    Verdict::Observable});
  corpus.push_back({"positions_speed_varying", "h = (p1, p2), unicycle with varying speed",
                    ModelFamily::Unicycle, ControlMode::SpeedVarying,
                    {pick(idx::p1), pick(idx::p2)}, Verdict::Observable});
  return corpus;
}

std::vector<LemmaOutcome> check_lemma_suite(int samples, unsigned seed, int depth) {
  const double speed = 1.0;  // drift speed for the Dubins scenarios
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-10.0, 10.0);
  std::uniform_real_distribution<double> ang(std::nextafter(-M_PI, 0.0), M_PI);
  std::uniform_real_distribution<double> force(-1.0, 1.0);

  std::vector<State5> states;
  while (static_cast<int>(states.size()) < samples) {
    State5 x = make_state(pos(rng), pos(rng), ang(rng), force(rng), force(rng));
    if (x.head<2>().norm() < 0.5) continue;  // keep clear of the corpus beacon at the origin
    states.push_back(x);
  }

  std::vector<LemmaOutcome> outcomes;
  for (const LemmaScenario& scenario : lemma_corpus()) {
    LemmaOutcome out;
    out.name = scenario.name;
    out.expected = scenario.expected;
    out.min_sigma = std::numeric_limits<double>::infinity();
    for (const State5& x : states) {
      const Eigen::MatrixXd m =
          build_codistribution(scenario.family, speed, scenario.channels, scenario.mode, x, depth);
      const RankReport r = numerical_rank(m);
      out.min_rank = std::min(out.min_rank, r.rank);
      out.max_rank = std::max(out.max_rank, r.rank);
      const int nsv = std::min<int>(5, static_cast<int>(m.rows()));
      out.min_sigma = std::min(out.min_sigma, r.singular_values[nsv - 1]);
    }
    out.actual = out.min_rank == 5 ? Verdict::Observable
               : out.max_rank < 5  ? Verdict::Unobservable
                                   : Verdict::Recorded;  // mixed verdicts across states
    out.matched = scenario.expected == Verdict::Recorded || out.actual == scenario.expected;
    outcomes.push_back(std::move(out));
  }
  return outcomes;
}

}  // namespace obs_scout
