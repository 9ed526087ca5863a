#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "obs_scout/sensors.hpp"

#include <cmath>
#include <random>

using namespace obs_scout;

namespace {

SensorSpec gps() { return {"gps", SensorKind::Gps, Vec2::Zero(), 2.0}; }
SensorSpec magnetometer() {
  return {"mag", SensorKind::Magnetometer, Vec2::Zero(), 12.0 * M_PI / 180.0};
}
SensorSpec range_at(double b1, double b2, double sigma = 1.0) {
  return {"range", SensorKind::RangeToBeacon, Vec2(b1, b2), sigma};
}
SensorSpec bearing_at(double b1, double b2, double sigma = 5.0 * M_PI / 180.0) {
  return {"bearing", SensorKind::BearingToBeacon, Vec2(b1, b2), sigma};
}

}  // namespace

TEST_CASE("noise-free measurement functions") {
  const State5 x = make_state(3, 4, 0, 0.7, -0.7);
  SUBCASE("gps reads both positions") {
    const auto z = measure(gps(), x);
    REQUIRE(z.size() == 2);
    CHECK(z[0] == 3.0);
    CHECK(z[1] == 4.0);
  }
  SUBCASE("range to the origin beacon is the 3-4-5 hypotenuse") {
    const auto z = measure(range_at(0, 0), x);
    REQUIRE(z.size() == 1);
    CHECK(z[0] == doctest::Approx(5.0));
  }
  SUBCASE("bearing subtracts heading and wraps") {
    const auto fwd = measure(bearing_at(0, 0), make_state(1, 1, 0, 0, 0));
    CHECK(fwd[0] == doctest::Approx(M_PI / 4));
    const auto back = measure(bearing_at(0, 0), make_state(1, 1, M_PI, 0, 0));
    CHECK(back[0] == doctest::Approx(-3 * M_PI / 4));
  }
  SUBCASE("magnetometer wraps the stored heading") {
    CHECK(measure(magnetometer(), make_state(0, 0, 3 * M_PI / 2, 0, 0))[0] ==
          doctest::Approx(-M_PI / 2));
    CHECK(measure(magnetometer(), make_state(0, 0, M_PI, 0, 0))[0] == doctest::Approx(M_PI));
  }
  SUBCASE("beacon coincidence is singular") {
    CHECK_THROWS_AS(measure(range_at(3, 4), x), std::domain_error);
    CHECK_THROWS_AS(measure(bearing_at(3, 4), x), std::domain_error);
  }
}

TEST_CASE("noisy measurements") {
  const State5 x = make_state(1, 2, 0.5, 0, 0);
  SUBCASE("vanishing sigma reproduces measure()") {
    SensorSpec quiet = gps();
    quiet.sigma = 0.0;
    std::mt19937_64 rng(1);
    CHECK(measure_noisy(quiet, x, rng) == measure(quiet, x));
  }
  SUBCASE("gps noise std matches its configured 2 m within 2 percent") {
    std::mt19937_64 rng(99);
    double sum = 0, sum_sq = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const auto z = measure_noisy(gps(), x, rng);
      const double e = z[0] - 1.0;
      sum += e;
      sum_sq += e * e;
    }
    const double std_dev = std::sqrt(sum_sq / n - (sum / n) * (sum / n));
    CHECK(std_dev == doctest::Approx(2.0).epsilon(0.02));
  }
  SUBCASE("magnetometer noise std matches its configured 12 degrees within 2 percent") {
    std::mt19937_64 rng(7);
    double sum = 0, sum_sq = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const double e = measure_noisy(magnetometer(), x, rng)[0] - 0.5;
      sum += e;
      sum_sq += e * e;
    }
    const double std_dev = std::sqrt(sum_sq / n - (sum / n) * (sum / n));
    CHECK(std_dev == doctest::Approx(12.0 * M_PI / 180.0).epsilon(0.02));
  }
}

TEST_CASE("jet measurements") {
  SUBCASE("order-0 part equals measure() for every kind") {
    const State5 x = make_state(2, -3, 2.9, 0.1, 0.2);
    const JetVector xj = seed(x, 2);
    for (const SensorSpec& spec : {gps(), magnetometer(), range_at(1, 1), bearing_at(1, 1)}) {
      const auto plain = measure(spec, x);
      const auto jets = jet_measure(spec, xj);
      REQUIRE(jets.size() == plain.size());
      for (std::size_t c = 0; c < plain.size(); ++c)
        CHECK(jets[c].value() == doctest::Approx(plain[c]).epsilon(1e-14));
    }
  }
  SUBCASE("range gradient is the unit direction to the state") {
    const auto jets = jet_measure(range_at(0, 0), seed(make_state(3, 4, 0, 0, 0), 2));
    const Vec5 g = jets[0].gradient();
    CHECK(g[idx::p1] == doctest::Approx(0.6));
    CHECK(g[idx::p2] == doctest::Approx(0.8));
    CHECK(g.tail<3>().norm() < 1e-15);
  }
  SUBCASE("bearing gradient w.r.t. heading is -1 everywhere") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 20; ++i) {
      const State5 x = make_state(u(rng), u(rng), u(rng), u(rng), u(rng));
      if (x.head<2>().norm() < 0.3) continue;
      const auto jets = jet_measure(bearing_at(0, 0), seed(x, 2));
      CHECK(jets[0].gradient()[idx::theta] == doctest::Approx(-1.0));
    }
  }
}

TEST_CASE("measurement properties at random states") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(-8.0, 8.0);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  const std::vector<SensorSpec> sensors{gps(), magnetometer(), range_at(0.5, -0.25),
                                        bearing_at(0.5, -0.25)};
  int tested = 0;
  while (tested < 100) {
    const State5 x = make_state(pos(rng), pos(rng), ang(rng), pos(rng) / 8, pos(rng) / 8);
    if ((x.head<2>() - Vec2(0.5, -0.25)).norm() < 0.2) continue;
    // keep away from the wrap discontinuity so central differences are smooth
    if (M_PI - std::abs(wrap_angle(x[idx::theta])) < 1e-2) continue;
    ++tested;
    const JetVector xj = seed(x, 1);
    for (const SensorSpec& spec : sensors) {
      const auto jets = jet_measure(spec, xj);
      const auto z0 = measure(spec, x);
      if (spec.kind == SensorKind::RangeToBeacon) {
        CHECK(z0[0] >= 0.0);
        CHECK(jets[0].gradient().head<2>().norm() == doctest::Approx(1.0));
      }
      for (std::size_t c = 0; c < z0.size(); ++c) {
        CHECK(std::abs(wrap_angle(z0[c])) <= M_PI + 1e-15);
        const Vec5 g = jets[c].gradient();
        for (int i = 0; i < 5; ++i) {
          const double h = 1e-6;
          State5 xp = x, xm = x;
          xp[i] += h;
          xm[i] -= h;
          double diff = measure(spec, xp)[c] - measure(spec, xm)[c];
          if (spec.angular()) diff = wrap_angle(diff);
          const double fd = diff / (2 * h);
          if (std::abs(g[i]) < 1e-9) {
            CHECK(std::abs(fd) < 1e-6);
          } else {
            CHECK(g[i] == doctest::Approx(fd).epsilon(1e-5));
          }
        }
      }
    }
  }
}
