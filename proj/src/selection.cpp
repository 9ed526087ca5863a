#include "obs_scout/selection.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace obs_scout {

SegmentGramians segment_gramians(const TrajectoryPlan& plan,
                                 const std::vector<SensorSpec>& sensors, int segment_count,
                                 double epsilon) {
  if (segment_count < 1) throw std::invalid_argument("segment count must be >= 1");
  if (sensors.empty()) throw std::invalid_argument("segment gramians need at least one sensor");

  SegmentGramians out;
  out.segment_count = segment_count;

  // The ten rollouts are shared by every sensor: build one ensemble for all
  // channels and split it per sensor afterwards.
  const OutputEnsemble all = build_output_ensemble(plan, sensors, epsilon);
  const double total = all.times.back();

  // Window edges: equal-duration targets snapped to the nearest grid sample.
  std::vector<std::size_t> edges(segment_count + 1, 0);
  edges.back() = all.times.size() - 1;
  for (int k = 1; k < segment_count; ++k) {
    const double target = total * k / segment_count;
    const auto it = std::lower_bound(all.times.begin(), all.times.end(), target);
    std::size_t i = static_cast<std::size_t>(it - all.times.begin());
    if (i > 0 && (it == all.times.end() || target - all.times[i - 1] < all.times[i] - target))
      --i;
    edges[k] = std::min(i, all.times.size() - 1);
  }
  for (int k = 1; k <= segment_count; ++k)
    if (edges[k] <= edges[k - 1])
      throw std::invalid_argument("segment count too large for the sample grid");
  for (std::size_t e : edges) out.boundaries.push_back(all.times[e]);

  std::size_t channel = 0;
  for (const SensorSpec& spec : sensors) {
    OutputEnsemble slice;
    slice.times = all.times;
    slice.epsilon = all.epsilon;
    for (int c = 0; c < spec.channel_count(); ++c)
      slice.channel_deltas.push_back(all.channel_deltas[channel++]);
    std::vector<Gramian> per_window;
    per_window.reserve(segment_count);
    for (int k = 0; k < segment_count; ++k)
      per_window.push_back(integrate_ensemble(slice, edges[k], edges[k + 1]));
    out.sensor_ids.push_back(spec.id);
    out.gramians.push_back(std::move(per_window));
  }
  return out;
}

double lambda_min(const Mat5& m) {
  return Eigen::SelfAdjointEigenSolver<Mat5>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

Mat5 assemble(const SegmentGramians& w, const SelectionPlan& plan) {
  if (static_cast<int>(plan.choice.size()) != w.segment_count)
    throw std::invalid_argument("selection plan segment count mismatch");
  Mat5 acc = Mat5::Zero();
  for (int k = 0; k < w.segment_count; ++k) {
    const int i = plan.choice[k];
    if (i == kNoSensor) continue;
    if (i < 0 || i >= w.sensor_count()) throw std::invalid_argument("sensor index out of range");
    acc += w.gramians[i][k].matrix;
  }
  return acc;
}

Mat5 assemble(const SegmentGramians& w, const FractionalPlan& s) {
  if (static_cast<int>(s.size()) != w.sensor_count())
    throw std::invalid_argument("fractional plan sensor count mismatch");
  Mat5 acc = Mat5::Zero();
  for (int i = 0; i < w.sensor_count(); ++i) {
    if (static_cast<int>(s[i].size()) != w.segment_count)
      throw std::invalid_argument("fractional plan segment count mismatch");
    for (int k = 0; k < w.segment_count; ++k) acc += s[i][k] * w.gramians[i][k].matrix;
  }
  return acc;
}

namespace {

// Option order for tie-breaking: sensors by index, then "none". An activation
// string compares lexicographically over segments in this order.
int rank_to_choice(int rank, int sensor_count) {
  return rank == sensor_count ? kNoSensor : rank;
}

}  // namespace

SelectionPlan optimize_exhaustive(const SegmentGramians& w) {
  const int p = w.sensor_count();
  const int K = w.segment_count;
  double space = 1.0;
  for (int k = 0; k < K; ++k) space *= p + 1;
  if (space > 1e6)
    throw std::runtime_error(
        "exhaustive search space (p+1)^K exceeds 1e6; use the greedy or relaxed solver");

  std::vector<int> ranks(K, 0);  // odometer over option ranks, most significant first
  SelectionPlan best;
  best.choice.assign(K, kNoSensor);
  best.objective = -1.0;
  bool done = false;
  while (!done) {
    SelectionPlan candidate;
    candidate.choice.resize(K);
    for (int k = 0; k < K; ++k) candidate.choice[k] = rank_to_choice(ranks[k], p);
    candidate.objective = lambda_min(assemble(w, candidate));
    if (candidate.objective > best.objective) best = candidate;  // ties keep the earlier string
    for (int k = K - 1;; --k) {
      if (k < 0) {
        done = true;
        break;
      }
      if (++ranks[k] <= p) break;
      ranks[k] = 0;
    }
  }
  return best;
}

SelectionPlan optimize_greedy(const SegmentGramians& w) {
  const int p = w.sensor_count();
  const int K = w.segment_count;
  SelectionPlan plan;
  plan.choice.assign(K, kNoSensor);

  Mat5 running = Mat5::Zero();
  for (int k = 0; k < K; ++k) {
    int best_rank = p;  // "none" keeps the running sum
    double best_value = lambda_min(running);
    for (int i = 0; i < p; ++i) {
      const double value = lambda_min(running + w.gramians[i][k].matrix);
      if (value > best_value || (value == best_value && i < best_rank)) {
        best_value = value;
        best_rank = i;
      }
    }
    plan.choice[k] = rank_to_choice(best_rank, p);
    if (plan.choice[k] != kNoSensor) running += w.gramians[plan.choice[k]][k].matrix;
  }

  // Single accept-only-improving sweep over the segments.
  plan.objective = lambda_min(assemble(w, plan));
  for (int k = 0; k < K; ++k) {
    for (int rank = 0; rank <= p; ++rank) {
      const int candidate = rank_to_choice(rank, p);
      if (candidate == plan.choice[k]) continue;
      SelectionPlan trial = plan;
      trial.choice[k] = candidate;
      const double value = lambda_min(assemble(w, trial));
      if (value > plan.objective) {
        plan.choice[k] = candidate;
        plan.objective = value;
      }
    }
  }
  return plan;
}

namespace {

// Euclidean projection of one segment's activation column onto
// {s >= 0, sum s <= 1} (clip negatives; if still over budget, shift onto the
// simplex by the sorted-threshold rule).
void project_segment(std::vector<double>& s) {
  double sum = 0.0;
  for (double& v : s) {
    v = std::max(v, 0.0);
    sum += v;
  }
  if (sum <= 1.0) return;
  std::vector<double> sorted = s;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0, tau = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double t = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (j + 1 == sorted.size() || sorted[j + 1] <= t) {
      tau = t;
      break;
    }
  }
  for (double& v : s) v = std::max(v - tau, 0.0);
}

}  // namespace

RelaxedResult optimize_relaxed(const SegmentGramians& w, int iterations, double step_scale) {
  if (iterations < 1) throw std::invalid_argument("relaxed solver needs at least one iteration");
  const int p = w.sensor_count();
  const int K = w.segment_count;

  // Scale steps by the largest per-window Gramian spectral norm so the
  // schedule is insensitive to the problem's units.
  double gain = 0.0;
  for (int i = 0; i < p; ++i)
    for (int k = 0; k < K; ++k)
      gain = std::max(gain, w.gramians[i][k].matrix.operatorNorm());
  if (gain == 0.0) gain = 1.0;

  FractionalPlan s(p, std::vector<double>(K, 1.0 / (p + 1)));
  RelaxedResult result;
  result.fractional = s;
  result.relaxed_objective = lambda_min(assemble(w, s));
  result.trace.reserve(iterations);

  // The greedy plan is a feasible point of the relaxation; fold it into the
  // incumbent so the reported relaxed value never falls below it.
  const SelectionPlan greedy = optimize_greedy(w);
  if (greedy.objective > result.relaxed_objective) {
    FractionalPlan indicator(p, std::vector<double>(K, 0.0));
    for (int k = 0; k < K; ++k)
      if (greedy.choice[k] != kNoSensor) indicator[greedy.choice[k]][k] = 1.0;
    result.relaxed_objective = greedy.objective;
    result.fractional = indicator;
  }

  // Supergradient ascent with step halving: a stalled incumbent restarts the
  // iterate from the best point at half the step, refining geometrically.
  double step = step_scale / gain;
  int stall = 0;
  for (int t = 1; t <= iterations; ++t) {
    const Mat5 ws = assemble(w, s);
    Eigen::SelfAdjointEigenSolver<Mat5> es(ws);
    const double value = es.eigenvalues()[0];
    const Vec5 v_min = es.eigenvectors().col(0);
    result.trace.push_back(value);
    if (value > result.relaxed_objective) {
      result.relaxed_objective = value;
      result.fractional = s;
      stall = 0;
    } else if (++stall >= 20) {
      s = result.fractional;
      step *= 0.5;
      stall = 0;
    }
    for (int k = 0; k < K; ++k) {
      std::vector<double> column(p);
      for (int i = 0; i < p; ++i)
        column[i] = s[i][k] + step * v_min.dot(w.gramians[i][k].matrix * v_min);
      project_segment(column);
      for (int i = 0; i < p; ++i) s[i][k] = column[i];
    }
  }
  const double final_value = lambda_min(assemble(w, s));
  if (final_value > result.relaxed_objective) {
    result.relaxed_objective = final_value;
    result.fractional = s;
  }

  // Round the best iterate, then fall back to greedy if rounding loses.
  SelectionPlan rounded;
  rounded.choice.assign(K, kNoSensor);
  for (int k = 0; k < K; ++k) {
    int arg = kNoSensor;
    double top = 0.5;
    for (int i = 0; i < p; ++i) {
      if (result.fractional[i][k] > top) {
        top = result.fractional[i][k];
        arg = i;
      }
    }
    rounded.choice[k] = arg;
  }
  rounded.objective = lambda_min(assemble(w, rounded));
  result.plan = greedy.objective > rounded.objective ? greedy : rounded;
  return result;
}

}  // namespace obs_scout
