#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "obs_scout/dynamics.hpp"

#include <cmath>
#include <random>

using namespace obs_scout;

namespace {

TrajectoryPlan line_plan(double duration, double dt, State5 x0 = State5::Zero(), double v = 1.0) {
  TrajectoryPlan plan;
  plan.initial = x0;
  plan.speed = v;
  plan.dt = dt;
  plan.segments = {SegmentPlan::line(duration)};
  return plan;
}

State5 rollout_rk4(State5 x, const Control& u, double dt, long steps) {
  for (long i = 0; i < steps; ++i) x = step_rk4(x, u, dt);
  return x;
}

}  // namespace

TEST_CASE("drift of the constant-speed system") {
  const State5 d1 = drift(make_state(0, 0, 0, 0, 0), 1.0);
  CHECK(d1.isApprox(make_state(1, 0, 0, 0, 0)));

  const State5 d2 = drift(make_state(0, 0, M_PI / 2, 0.5, -0.2), 2.0);
  CHECK(d2[idx::p1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d2[idx::p2] == doctest::Approx(1.8));
  CHECK(d2.tail<3>().norm() == 0.0);

  const State5 d3 = drift(make_state(3, 4, M_PI, 0, 0), 1.0);
  CHECK(d3[idx::p1] == doctest::Approx(-1.0));
  CHECK(std::abs(d3[idx::p2]) < 1e-12);
}

TEST_CASE("closed-form line propagation") {
  CHECK(propagate_line(make_state(0, 0, 0, 0, 0), 1.0, 1.0).isApprox(make_state(1, 0, 0, 0, 0)));
  CHECK(propagate_line(make_state(0, 0, 0, 0.5, 0), 1.0, 2.0)
            .isApprox(make_state(3, 0, 0, 0.5, 0)));
  const State5 y = propagate_line(make_state(1, 1, M_PI / 4, 0.1, 0.2), std::sqrt(2.0), 1.0);
  CHECK(y[idx::p1] == doctest::Approx(2.1));
  CHECK(y[idx::p2] == doctest::Approx(2.2));
  CHECK(y[idx::theta] == doctest::Approx(M_PI / 4));
  CHECK(y[idx::c1] == doctest::Approx(0.1));
  CHECK(y[idx::c2] == doctest::Approx(0.2));
}

TEST_CASE("closed-form arc propagation") {
  const State5 quarter = propagate_arc(make_state(0, 0, 0, 0, 0), 1.0, M_PI / 2, 1.0);
  CHECK(quarter[idx::p1] == doctest::Approx(2.0 / M_PI));
  CHECK(quarter[idx::p2] == doctest::Approx(2.0 / M_PI));
  CHECK(quarter[idx::theta] == doctest::Approx(M_PI / 2));

  const State5 full = propagate_arc(make_state(0, 0, 0, 0, 0), 1.0, 2 * M_PI, 1.0);
  CHECK(std::abs(full[idx::p1]) < 1e-12);
  CHECK(std::abs(full[idx::p2]) < 1e-12);
  CHECK(full[idx::theta] == doctest::Approx(2 * M_PI));

  const State5 forced = propagate_arc(make_state(0, 0, 0, 1, 0), 1.0, 2 * M_PI, 1.0);
  CHECK(forced[idx::p1] == doctest::Approx(1.0));  // circle centre displaced by c t
  CHECK(std::abs(forced[idx::p2]) < 1e-12);

  CHECK_THROWS_AS(propagate_arc(State5::Zero(), 1.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("RK4 agrees with the closed forms") {
  SUBCASE("exact on line motion") {
    const State5 x0 = make_state(0.4, -0.3, 0.9, 0.2, -0.1);
    const Control u{1.4, 0.0};
    const State5 num = rollout_rk4(x0, u, 0.01, 100);
    const State5 exact = propagate_line(x0, u.speed, 1.0);
    CHECK((num - exact).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("arc within 1e-8 at dt = 1e-3") {
    const State5 x0 = make_state(0, 0, 0, 0, 0);
    const Control u{1.0, 1.0};
    const State5 num = rollout_rk4(x0, u, 1e-3, 1000);
    const State5 exact = propagate_arc(x0, 1.0, 1.0, 1.0);
    CHECK((num - exact).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("fourth-order convergence on arcs") {
    const State5 x0 = make_state(0, 0, 0.3, 0.1, 0.0);
    const Control u{1.0, 2.0};
    const State5 exact = propagate_arc(x0, 1.0, 2.0, 1.0);
    const double e1 = (rollout_rk4(x0, u, 0.1, 10) - exact).cwiseAbs().maxCoeff();
    const double e2 = (rollout_rk4(x0, u, 0.05, 20) - exact).cwiseAbs().maxCoeff();
    const double ratio = e1 / e2;
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
  }
  SUBCASE("max position error below 1e-6 across speeds and turn rates") {
    for (double v : {0.5, 2.0})
      for (double w : {-2.0, 0.7}) {
        const State5 x0 = make_state(1, -1, 0.2, 0.3, -0.2);
        const Control u{v, w};
        State5 x = x0;
        double worst = 0.0;
        for (int k = 1; k <= 10000; ++k) {
          x = step_rk4(x, u, 1e-3);
          if (k % 500 == 0) {
            const State5 exact = propagate_arc(x0, v, w, k * 1e-3);
            worst = std::max(worst, (x.head<2>() - exact.head<2>()).norm());
          }
        }
        CHECK(worst < 1e-6);
      }
  }
}

TEST_CASE("flow additivity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 50; ++n) {
    const State5 x = make_state(5 * u(rng), 5 * u(rng), 3 * u(rng), u(rng), u(rng));
    const double v = 1.0 + std::abs(u(rng)), a = std::abs(u(rng)), b = std::abs(u(rng));
    const State5 one = propagate_line(x, v, a + b);
    const State5 two = propagate_line(propagate_line(x, v, a), v, b);
    CHECK((one - two).cwiseAbs().maxCoeff() < 1e-12);

    const double w = u(rng) > 0 ? 1.3 : -0.8;
    const State5 arc_one = propagate_arc(x, v, w, a + b);
    const State5 arc_two = propagate_arc(propagate_arc(x, v, w, a), v, w, b);
    CHECK((arc_one - arc_two).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("unforced line displacement has magnitude v t") {
  for (double th : {-2.0, 0.0, 1.1}) {
    const State5 x0 = make_state(3, -2, th, 0, 0);
    const State5 y = propagate_line(x0, 1.7, 2.5);
    CHECK((y.head<2>() - x0.head<2>()).norm() == doctest::Approx(1.7 * 2.5).epsilon(1e-13));
  }
}

TEST_CASE("simulate samples the plan grid") {
  SUBCASE("one line of 1 s at dt 0.5 gives samples 0, 0.5, 1") {
    const Trajectory t = simulate(line_plan(1.0, 0.5));
    REQUIRE(t.size() == 3);
    CHECK(t.times[0] == 0.0);
    CHECK(t.times[1] == doctest::Approx(0.5));
    CHECK(t.times[2] == doctest::Approx(1.0));
  }
  SUBCASE("segment boundaries appear even off the dt grid") {
    TrajectoryPlan plan = line_plan(1.0, 0.4);
    plan.segments.push_back(SegmentPlan::arc(1.0, 1.0));
    const Trajectory t = simulate(plan);
    bool has_boundary = false;
    for (double time : t.times) has_boundary = has_boundary || time == 1.0;
    CHECK(has_boundary);
  }
  SUBCASE("theta trace is 0 on the line then ramps on the arc") {
    TrajectoryPlan plan = line_plan(1.0, 0.25);
    plan.segments.push_back(SegmentPlan::arc(1.0, 1.0));
    const Trajectory t = simulate(plan);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double expect = t.times[i] <= 1.0 ? 0.0 : t.times[i] - 1.0;
      CHECK(t.states[i][idx::theta] == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  SUBCASE("end state composes the segment flows") {
    TrajectoryPlan plan = line_plan(1.5, 0.1, make_state(1, 2, 0.3, 0.1, -0.1), 1.2);
    plan.segments.push_back(SegmentPlan::arc(2.5, -0.7));
    const Trajectory t = simulate(plan);
    const State5 expect =
        propagate_arc(propagate_line(plan.initial, plan.speed, 1.5), plan.speed, -0.7, 2.5);
    CHECK((t.states.back() - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("forces are constant along every sample") {
    TrajectoryPlan plan = line_plan(1.0, 0.01, make_state(0, 0, 0.2, 0.4, -0.3));
    plan.segments.push_back(SegmentPlan::arc(1.0, 0.5));
    const Trajectory t = simulate(plan);
    for (const State5& x : t.states) {
      CHECK(x[idx::c1] == 0.4);
      CHECK(x[idx::c2] == -0.3);
    }
  }
  SUBCASE("controls are piecewise constant with the segment turn rate") {
    TrajectoryPlan plan = line_plan(1.0, 0.5);
    plan.segments.push_back(SegmentPlan::arc(1.0, 0.9));
    const Trajectory t = simulate(plan);
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
      CHECK(t.controls[i].turn_rate == (t.times[i] < 1.0 ? 0.0 : 0.9));
  }
}

TEST_CASE("plan validation") {
  TrajectoryPlan empty;
  empty.segments.clear();
  CHECK_THROWS_AS(simulate(empty), std::invalid_argument);

  TrajectoryPlan coarse = line_plan(0.5, 0.2);
  coarse.segments.push_back(SegmentPlan::line(0.1));  // dt > segment duration
  CHECK_THROWS_AS(simulate(coarse), std::invalid_argument);

  CHECK_THROWS_AS(SegmentPlan::arc(1.0, 0.0), std::invalid_argument);
}
