#include "regfrac/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace regfrac {

namespace {

// Lanczos coefficients for g = 7, n = 9 (Godfrey's tabulation).
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kPi = 3.141592653589793238462643383279502884;

double lanczos_core(double x) {
  // Gamma(x) for x >= 0.5.
  double z = x - 1.0;
  double acc = kLanczos[0];
  for (int k = 1; k < 9; ++k) acc += kLanczos[k] / (z + k);
  double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

}  // namespace

double gamma_fn(double x) {
  if (std::isnan(x)) return x;
  if (x <= 0.0 && x == std::floor(x))
    throw std::domain_error("gamma_fn: nonpositive integer argument");
  if (x < 0.5) {
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return kPi / (std::sin(kPi * x) * lanczos_core(1.0 - x));
  }
  return lanczos_core(x);
}

double log_gamma(double x) {
  if (x <= 0.0) throw std::domain_error("log_gamma: argument must be positive");
  if (x < 0.5) return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
  double z = x - 1.0;
  double acc = kLanczos[0];
  for (int k = 1; k < 9; ++k) acc += kLanczos[k] / (z + k);
  double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

double sphere_area(int dim) {
  if (dim < 1) throw std::domain_error("sphere_area: dim must be >= 1");
  return 2.0 * std::pow(kPi, 0.5 * dim) / gamma_fn(0.5 * dim);
}

double ball_volume(int dim) { return sphere_area(dim) / dim; }

}  // namespace regfrac
