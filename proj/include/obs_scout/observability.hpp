#pragma once

#include "obs_scout/jet.hpp"
#include "obs_scout/sensors.hpp"
#include "obs_scout/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace obs_scout {

/// Which model family the codistribution is built for. Dubins folds the
/// constant speed into the drift; Unicycle keeps the speed as the first input.
enum class ModelFamily { Unicycle, Dubins };

/// Control activity, which decides the Lie-bracket directions that enter the
/// observability algebra: NoControl uses the drift alone, TurnActive adds
/// turn-field chains, SpeedVarying adds speed-field chains.
enum class ControlMode { NoControl, TurnActive, SpeedVarying };

const char* to_string(ControlMode mode);

/// A scalar measurement channel evaluated on jets.
using ChannelFn = std::function<Jet(const JetVector&)>;

/// Adapts a sensor's channels to ChannelFn form.
std::vector<ChannelFn> sensor_channels(const std::vector<SensorSpec>& sensors);

inline constexpr double kRankTolerance = 1e-8;  // relative to the largest singular value
inline constexpr int kDefaultLieDepth = 4;      // rank saturates by depth 4 for this family

struct RankReport {
  int rank = 0;
  double tolerance = kRankTolerance;
  Vec5 singular_values = Vec5::Zero();  // descending, zero-padded
  std::vector<Vec5> null_basis;
  bool observable = false;  // rank == 5
  int lie_depth = kDefaultLieDepth;
};

/// Rows are gradients of the observability algebra members at the given state:
/// each channel h, its iterated Lie derivatives along the drift up to depth,
/// and, when control is active, one extra Lie step along the active input
/// field applied to each drift chain. Jets are seeded at order depth + 1.
Eigen::MatrixXd build_codistribution(ModelFamily family, double speed,
                                     const std::vector<ChannelFn>& channels, ControlMode mode,
                                     const State5& state, int depth = kDefaultLieDepth);

/// SVD-based numerical rank: count of singular values above tol_rel times the
/// largest; the null-space basis comes from the trailing right singular vectors.
RankReport numerical_rank(const Eigen::MatrixXd& matrix, double tol_rel = kRankTolerance);

enum class Verdict { Observable, Unobservable, Recorded };

const char* to_string(Verdict v);

/// One executable scenario of the analytic observability results.
struct LemmaScenario {
  std::string name;
  std::string description;
  ModelFamily family = ModelFamily::Dubins;
  ControlMode mode = ControlMode::NoControl;
  std::vector<ChannelFn> channels;
  Verdict expected = Verdict::Unobservable;
};

struct LemmaOutcome {
  std::string name;
  Verdict expected;
  Verdict actual;        // unanimous verdict over the sampled states
  int min_rank = 5;      // smallest rank seen across states
  int max_rank = 0;      // largest rank seen across states
  double min_sigma = 0;  // smallest singular value across states
  bool matched = false;  // expected == actual (Recorded always matches)
};

/// The fixed scenario corpus (necessary-condition lemmas, the observable
/// cases, and the quartic single-output boundary probe, which is recorded
/// without an asserted verdict).
std::vector<LemmaScenario> lemma_corpus();

/// Evaluates every corpus scenario at `samples` random states (fixed seed):
/// p in [-10,10]^2, theta in (-pi,pi], c in [-1,1]^2, re-drawn if within 0.5 m
/// of a beacon. Unobservable requires unanimity; Observable requires rank 5
/// at every sample.
std::vector<LemmaOutcome> check_lemma_suite(int samples = 25, unsigned seed = 2024,
                                            int depth = kDefaultLieDepth);

}  // namespace obs_scout
