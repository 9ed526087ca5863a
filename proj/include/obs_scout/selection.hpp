#pragma once

#include "obs_scout/gramian.hpp"
#include "obs_scout/types.hpp"

#include <string>
#include <vector>

namespace obs_scout {

/// Per-sensor, per-segment Gramians: the plan horizon split into K windows,
/// perturbations anchored at the global initial state, each window integrating
/// its own slice so the slices of one sensor sum to its full-horizon Gramian.
struct SegmentGramians {
  int segment_count = 0;                        // K
  std::vector<std::string> sensor_ids;          // size p
  std::vector<std::vector<Gramian>> gramians;   // [sensor][segment]
  std::vector<double> boundaries;               // K + 1 window edges on the sample grid

  int sensor_count() const { return static_cast<int>(sensor_ids.size()); }
};

SegmentGramians segment_gramians(const TrajectoryPlan& plan,
                                 const std::vector<SensorSpec>& sensors, int segment_count,
                                 double epsilon);

inline constexpr int kNoSensor = -1;

/// Binary activation plan: at most one sensor per segment (kNoSensor = off).
struct SelectionPlan {
  std::vector<int> choice;  // size K, each in {kNoSensor, 0..p-1}
  double objective = 0.0;   // lambda_min of the assembled Gramian
};

/// Fractional activations, one weight per sensor per segment (relaxed domain).
using FractionalPlan = std::vector<std::vector<double>>;  // [sensor][segment]

Mat5 assemble(const SegmentGramians& w, const SelectionPlan& plan);
Mat5 assemble(const SegmentGramians& w, const FractionalPlan& s);
double lambda_min(const Mat5& m);

/// Global optimum by enumeration over the (p+1)^K activation strings. Ties go
/// to the lexicographically smallest string (sensors in order, then "none").
/// Throws when the search space exceeds 1e6, pointing at greedy/relaxed.
SelectionPlan optimize_exhaustive(const SegmentGramians& w);

/// Segment-by-segment greedy choice maximizing the running lambda_min,
/// followed by one accept-only-improving local sweep. Same tie order.
SelectionPlan optimize_greedy(const SegmentGramians& w);

struct RelaxedResult {
  SelectionPlan plan;               // better of the rounded and greedy plans
  FractionalPlan fractional;        // best relaxed iterate
  double relaxed_objective = 0.0;   // lambda_min at the best iterate
  std::vector<double> trace;        // objective per iteration
};

/// Projected supergradient ascent of lambda_min over the per-segment simplex
/// {s >= 0, sum_i s_i[k] <= 1}; the supergradient entry for (i, k) is
/// v_min^T W_i[k] v_min with v_min the smallest eigenvector of W(s).
RelaxedResult optimize_relaxed(const SegmentGramians& w, int iterations = 600,
                               double step_scale = 1.0);

}  // namespace obs_scout
