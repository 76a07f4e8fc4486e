#include "regfrac/grid.hpp"

#include <cmath>
#include <memory>

#include "doctest.h"
#include "regfrac/special.hpp"

using namespace regfrac;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("grid nodes follow the grading formula") {
  RadialGrid uniform(8, 1.0, 2);
  for (int i = 0; i <= 8; ++i)
    CHECK(uniform.node(i) == doctest::Approx(i / 8.0).epsilon(1e-15));

  RadialGrid graded(8, 2.0, 2);
  for (int i = 0; i <= 8; ++i) {
    const double expected = 1.0 - std::pow((8.0 - i) / 8.0, 2.0);
    CHECK(graded.node(i) == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("grid endpoints are pinned") {
  for (int m : {8, 33, 256})
    for (double beta : {1.0, 2.0, 3.0}) {
      RadialGrid g(m, beta, 2);
      CHECK(g.node(0) == 0.0);
      CHECK(g.node(m) == 1.0);
      for (int i = 0; i < m; ++i) CHECK(g.node(i) < g.node(i + 1));
    }
}

TEST_CASE("grid configuration errors") {
  CHECK_THROWS_AS(RadialGrid(4, 1.0, 2), ConfigError);   // too coarse
  CHECK_THROWS_AS(RadialGrid(7, 1.0, 2), ConfigError);
  CHECK_THROWS_AS(RadialGrid(16, 0.5, 2), ConfigError);  // beta < 1
  CHECK_THROWS_AS(RadialGrid(8192, 1.0, 2), ConfigError);  // dense-storage cap
  CHECK_THROWS_AS(RadialGrid(16, 1.0, 1), ConfigError);
  CHECK_NOTHROW(RadialGrid(4096, 2.0, 2));
}

TEST_CASE("ball weights sum to the ball volume") {
  for (int n : {2, 3}) {
    RadialGrid g(64, 2.0, n);
    double total = 0.0;
    for (double w : g.ball_weights()) {
      CHECK(w > 0.0);
      total += w;
    }
    CHECK(total == doctest::Approx(ball_volume(n)).epsilon(1e-13));
  }
}

TEST_CASE("ball integral is exact for linear profiles") {
  auto g = std::make_shared<RadialGrid>(32, 1.7, 2);
  // int_{B_1} (a + b r) dx = 2 pi (a/2 + b/3)
  const double a = 0.7, b = -1.3;
  RadialProfile u(g, [a, b](double r) { return a + b * r; });
  CHECK(u.ball_integral() ==
        doctest::Approx(2.0 * kPi * (a / 2.0 + b / 3.0)).epsilon(1e-13));
}

TEST_CASE("constant profile integral") {
  auto g = std::make_shared<RadialGrid>(16, 2.0, 3);
  RadialProfile u(g, 2.5);
  CHECK(u.ball_integral() == doctest::Approx(2.5 * ball_volume(3)).epsilon(1e-13));
}

TEST_CASE("interpolation between nodes is linear") {
  auto g = std::make_shared<RadialGrid>(8, 1.0, 2);
  RadialProfile u(g, [](double r) { return 3.0 * r; });
  CHECK(u.at(0.5 / 8.0) == doctest::Approx(3.0 * 0.5 / 8.0).epsilon(1e-14));
  CHECK(u.at(0.0) == doctest::Approx(0.0));
  CHECK(u.at(1.0) == doctest::Approx(3.0));
  CHECK(u.at(-1.0) == doctest::Approx(u[0]));  // clamped
  CHECK(u.at(2.0) == doctest::Approx(u[8]));
}

TEST_CASE("nonlinear ball integrand quadrature") {
  auto g = std::make_shared<RadialGrid>(256, 1.0, 2);
  RadialProfile u(g, [](double r) { return 1.0 + r; });
  // int (1+r)^2 dx over the disk = 2 pi int_0^1 (1+r)^2 r dr = 2 pi * 17/12
  const double got = u.ball_integral_of([](double v, double) { return v * v; });
  CHECK(got == doctest::Approx(2.0 * kPi * 17.0 / 12.0).epsilon(1e-5));
}

TEST_CASE("profile arithmetic and grid guards") {
  auto g = std::make_shared<RadialGrid>(8, 1.0, 2);
  auto g2 = std::make_shared<RadialGrid>(16, 1.0, 2);
  RadialProfile u(g, 1.0), v(g, 2.0), w(g2, 1.0);
  u += v;
  CHECK(u[3] == doctest::Approx(3.0));
  u *= 2.0;
  CHECK(u[5] == doctest::Approx(6.0));
  CHECK_THROWS_AS(u += w, UsageError);
  CHECK_THROWS_AS(sup_distance(u, w), UsageError);
  CHECK_THROWS_AS(RadialProfile(g, std::vector<double>(5, 1.0)), UsageError);
  CHECK(u.shifted(6.0).sup_norm() == doctest::Approx(0.0));
}

TEST_CASE("min max and sup distance") {
  auto g = std::make_shared<RadialGrid>(8, 1.0, 2);
  RadialProfile u(g, [](double r) { return 1.0 - r; });
  CHECK(u.min_value() == doctest::Approx(0.0));
  CHECK(u.max_value() == doctest::Approx(1.0));
  RadialProfile v = u;
  v[4] += 0.25;
  CHECK(sup_distance(u, v) == doctest::Approx(0.25));
}
