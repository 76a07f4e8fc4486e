#include "regfrac/kernel.hpp"

#include <cmath>

#include "doctest.h"
#include "regfrac/rng.hpp"
#include "regfrac/special.hpp"
#include "regfrac/types.hpp"

using namespace regfrac;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("normalization constant anchors") {
  // c_{2,1/2} = 1/(2 pi) exactly; other values frozen from 40-digit arithmetic
  CHECK(normalization_constant(FracOrder(0.5, 2)) ==
        doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-12));
  CHECK(normalization_constant(FracOrder(0.25, 2)) ==
        doctest::Approx(0.083241983875425065489).epsilon(1e-12));
  CHECK(normalization_constant(FracOrder(0.5, 3)) ==
        doctest::Approx(0.10132118364233777144).epsilon(1e-12));
  CHECK(normalization_constant(FracOrder(0.1, 2)) ==
        doctest::Approx(0.032551422029941055811).epsilon(1e-12));
}

TEST_CASE("normalization constant is positive across the parameter box") {
  for (int n : {2, 3, 4, 7})
    for (double s : {0.05, 0.25, 0.5, 0.75, 0.95})
      CHECK(normalization_constant(FracOrder(s, n)) > 0.0);
}

TEST_CASE("fractional order validation") {
  CHECK_THROWS_AS(FracOrder(0.0, 2), DomainError);
  CHECK_THROWS_AS(FracOrder(1.0, 2), DomainError);
  CHECK_THROWS_AS(FracOrder(-0.3, 2), DomainError);
  CHECK_THROWS_AS(FracOrder(1.7, 2), DomainError);
  CHECK_THROWS_AS(FracOrder(0.3, 1), DomainError);
  CHECK_THROWS_AS(FracOrder(0.6, 2).require_solver_range(false), ConfigError);
  CHECK_NOTHROW(FracOrder(0.6, 2).require_solver_range(true));
  CHECK_NOTHROW(FracOrder(0.5, 2).require_solver_range(false));
}

TEST_CASE("angular kernel at the center has the closed form") {
  KernelEvaluator ke(FracOrder(0.5, 2));
  for (double rho : {0.2, 0.7, 1.5, 20.0})
    CHECK(ke.angular(0.0, rho) ==
          doctest::Approx(2.0 * kPi * std::pow(rho, -3.0)).epsilon(1e-13));
  KernelEvaluator ke3(FracOrder(0.25, 3));
  CHECK(ke3.angular(0.0, 0.5) ==
        doctest::Approx(4.0 * kPi * std::pow(0.5, -3.5)).epsilon(1e-13));
}

TEST_CASE("angular kernel in three dimensions matches its elementary antiderivative") {
  // for N = 3 the angular integral has the closed form
  //   2 pi (|r-rho|^{-1-2s} - (r+rho)^{-1-2s}) / (r rho (1+2s))
  for (double s : {0.25, 0.5}) {
    KernelEvaluator ke(FracOrder(s, 3));
    for (auto [r, rho] : {std::pair{0.3, 0.8}, {0.5, 0.52}, {0.9, 0.1}}) {
      const double closed = 2.0 * kPi / (r * rho * (1.0 + 2.0 * s)) *
                            (std::pow(std::abs(r - rho), -1.0 - 2.0 * s) -
                             std::pow(r + rho, -1.0 - 2.0 * s));
      CHECK(ke.angular(r, rho) == doctest::Approx(closed).epsilon(1e-11));
    }
  }
}

TEST_CASE("angular kernel symmetry and positivity") {
  KernelEvaluator ke(FracOrder(0.25, 2));
  CHECK(ke.angular(0.3, 0.7) == doctest::Approx(ke.angular(0.7, 0.3)).epsilon(1e-12));
  Xoshiro256Plus rng(42);
  for (int t = 0; t < 200; ++t) {
    const double r = rng.uniform(0.01, 0.99);
    double rho = rng.uniform(0.01, 0.99);
    if (std::abs(r - rho) < 1e-4) rho += 2e-4;
    const double a = ke.angular(r, rho);
    const double b = ke.angular(rho, r);
    CHECK(a > 0.0);
    CHECK(std::abs(a - b) <= 1e-10 * a);
  }
}

TEST_CASE("angular kernel rejects the diagonal and negative radii") {
  KernelEvaluator ke(FracOrder(0.25, 2));
  CHECK_THROWS_AS(ke.angular(0.4, 0.4), DomainError);
  CHECK_THROWS_AS(ke.angular(-0.1, 0.4), DomainError);
  CHECK_THROWS_AS(ke.angular(0.4, -2.0), DomainError);
}

TEST_CASE("near-diagonal asymptotic form agrees with quadrature") {
  for (int n : {2, 3}) {
    for (double s : {0.25, 0.5}) {
      KernelEvaluator ke(FracOrder(s, n));
      const double r = 0.55, rho = r + 1e-4;
      const double ratio = ke.angular(r, rho) / ke.angular_asymptotic(r, rho);
      CHECK(std::abs(ratio - 1.0) < 0.01);
    }
  }
}

TEST_CASE("phi center anchor |S^{N-1}|/(2s)") {
  for (int n : {2, 3}) {
    for (double s : {0.1, 0.25, 0.5}) {
      KernelEvaluator ke(FracOrder(s, n));
      const double exact = sphere_area(n) / (2.0 * s);
      CHECK(std::abs(ke.phi(0.0) - exact) <= 1e-8 * exact);
    }
  }
}

TEST_CASE("phi grows toward the boundary") {
  // the complement gets closer as r grows
  for (int n : {2, 3}) {
    KernelEvaluator ke(FracOrder(0.25, n));
    CHECK(ke.phi(0.3) < ke.phi(0.6));
    double prev = ke.phi(0.0);
    for (int k = 1; k <= 11; ++k) {
      const double cur = ke.phi(k / 12.0);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("phi domain") {
  KernelEvaluator ke(FracOrder(0.25, 2));
  CHECK_THROWS_AS(ke.phi(1.0), DomainError);
  CHECK_THROWS_AS(ke.phi(1.5), DomainError);
  CHECK_THROWS_AS(ke.phi(-0.1), DomainError);
}

TEST_CASE("boundary constant anchors") {
  CHECK(KernelEvaluator(FracOrder(0.5, 2)).boundary_constant() ==
        doctest::Approx(2.0).epsilon(1e-12));
  // frozen from 40-digit evaluation of the defining integral
  CHECK(KernelEvaluator(FracOrder(0.25, 2)).boundary_constant() ==
        doctest::Approx(4.7925609389423688298).epsilon(1e-12));
  CHECK(KernelEvaluator(FracOrder(0.5, 3)).boundary_constant() ==
        doctest::Approx(kPi).epsilon(1e-12));
  CHECK(KernelEvaluator(FracOrder(0.25, 3)).boundary_constant() ==
        doctest::Approx(8.3775804095727819692).epsilon(1e-12));
}

TEST_CASE("boundary asymptotics phi(r)(1-r)^{2s} -> c1") {
  for (double s : {0.25, 0.5}) {
    KernelEvaluator ke(FracOrder(s, 2));
    const double c1 = ke.boundary_constant();
    const double r = 1.0 - 1e-4;
    const double ratio = ke.phi(r) * std::pow(1.0 - r, 2.0 * s) / c1;
    CHECK(std::abs(ratio - 1.0) <= 0.02);
    // the approach is monotone over decreasing gaps
    double prev = std::abs(ke.phi(1.0 - 1e-2) * std::pow(1e-2, 2.0 * s) / c1 - 1.0);
    for (double gap : {1e-3, 1e-4, 1e-5}) {
      const double dev = std::abs(ke.phi(1.0 - gap) * std::pow(gap, 2.0 * s) / c1 - 1.0);
      CHECK(dev <= prev + 1e-12);
      prev = dev;
    }
  }
}

TEST_CASE("profile integral closed form") {
  // I_{2,1/2} = 1, I_{3,1/2} = 1/2
  CHECK(KernelEvaluator(FracOrder(0.5, 2)).profile_integral() ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(KernelEvaluator(FracOrder(0.5, 3)).profile_integral() ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(KernelEvaluator(FracOrder(0.25, 2)).profile_integral() ==
        doctest::Approx(1.1981402347355922074).epsilon(1e-12));
}

TEST_CASE("angular quadrature configuration is validated") {
  AngularQuadrature bad;
  bad.nodes = 3;
  CHECK_THROWS_AS(KernelEvaluator(FracOrder(0.25, 2), bad), ConfigError);
  CHECK_THROWS_AS(KernelEvaluator(FracOrder(0.25, 2), {}, 0.5), ConfigError);
  CHECK_THROWS_AS(KernelEvaluator(FracOrder(0.25, 2), {}, 1e3, -1.0), ConfigError);
}

TEST_CASE("evaluations are deterministic") {
  KernelEvaluator a(FracOrder(0.25, 2)), b(FracOrder(0.25, 2));
  CHECK(a.angular(0.31, 0.74) == b.angular(0.31, 0.74));
  CHECK(a.phi(0.99) == b.phi(0.99));
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != KernelEvaluator(FracOrder(0.3, 2)).hash());
}
