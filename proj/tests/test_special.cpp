#include "regfrac/special.hpp"

#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "doctest.h"

using namespace regfrac;

// reference values computed with 40-digit arithmetic
TEST_CASE("gamma matches high-precision references") {
  CHECK(gamma_fn(0.75) == doctest::Approx(1.2254167024651776451).epsilon(1e-13));
  CHECK(gamma_fn(1.25) == doctest::Approx(0.90640247705547707798).epsilon(1e-13));
  CHECK(gamma_fn(4.7) == doctest::Approx(15.431411600047435652).epsilon(1e-13));
  CHECK(gamma_fn(0.1) == doctest::Approx(9.5135076986687312858).epsilon(1e-13));
  CHECK(gamma_fn(0.0025) == doctest::Approx(399.42525131864379216).epsilon(1e-12));
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-13));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
  CHECK(gamma_fn(1.5) == doctest::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-13));
}

TEST_CASE("gamma functional equation on a sweep") {
  for (double x = 0.05; x < 5.0; x += 0.173) {
    CHECK(gamma_fn(x + 1.0) == doctest::Approx(x * gamma_fn(x)).epsilon(1e-12));
  }
}

TEST_CASE("gamma rejects nonpositive integers") {
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-3.0), std::domain_error);
}

TEST_CASE("log_gamma is consistent with gamma") {
  for (double x : {0.2, 0.9, 1.7, 3.3, 10.0})
    CHECK(std::exp(log_gamma(x)) == doctest::Approx(gamma_fn(x)).epsilon(1e-12));
}

TEST_CASE("sphere areas and ball volumes") {
  CHECK(sphere_area(2) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
  CHECK(sphere_area(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ball_volume(2) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-14));
}
