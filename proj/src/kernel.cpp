#include "regfrac/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "regfrac/quadrature.hpp"
#include "regfrac/special.hpp"

namespace regfrac {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

std::uint64_t hash_mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t hash_double(double x) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(x));
  std::memcpy(&bits, &x, sizeof(bits));
  return bits;
}
}  // namespace

void AngularQuadrature::validate() const {
  if (nodes < 4) throw ConfigError("angular quadrature needs at least 4 nodes per panel");
  if (grading < 1.0) throw ConfigError("angular grading exponent must be >= 1");
  if (max_panels < 2) throw ConfigError("angular panel cap must be >= 2");
}

std::uint64_t AngularQuadrature::hash() const {
  std::uint64_t h = 0x243f6a8885a308d3ull;
  h = hash_mix(h, static_cast<std::uint64_t>(nodes));
  h = hash_mix(h, hash_double(grading));
  h = hash_mix(h, static_cast<std::uint64_t>(max_panels));
  return h;
}

double normalization_constant(const FracOrder& order) {
  const double s = order.s();
  const int n = order.dim();
  return std::pow(2.0, 2.0 * s) * s * gamma_fn(0.5 * (n + 2.0 * s)) /
         (std::pow(kPi, 0.5 * n) * gamma_fn(1.0 - s));
}

KernelEvaluator::KernelEvaluator(FracOrder order, AngularQuadrature angular,
                                 double tail_cutoff, double near_diag_delta)
    : order_(order),
      angular_(angular),
      tail_cutoff_(tail_cutoff),
      near_diag_delta_(near_diag_delta) {
  angular_.validate();
  if (!(tail_cutoff_ > 1.0)) throw ConfigError("tail_cutoff must exceed 1");
  if (!(near_diag_delta_ > 0.0)) throw ConfigError("near_diag_delta must be positive");
  const double s = order_.s();
  const int n = order_.dim();
  c_ns_ = normalization_constant(order_);
  // I_{N,s} = (1/2) B((N-1)/2, (2s+1)/2)
  profile_integral_ = 0.5 * gamma_fn(0.5 * (n - 1)) * gamma_fn(s + 0.5) /
                      gamma_fn(0.5 * (n + 2.0 * s));
  sphere_nm1_ = sphere_area(n);
  sphere_nm2_ = (n == 2) ? 2.0 : sphere_area(n - 1);
  c1_ = sphere_nm2_ * profile_integral_ / (2.0 * s);
}

double KernelEvaluator::angular_asymptotic(double r, double rho) const {
  const int n = order_.dim();
  const double s = order_.s();
  return sphere_nm2_ * std::pow(r * rho, -0.5 * (n - 1)) * profile_integral_ *
         std::pow(std::abs(r - rho), -(1.0 + 2.0 * s));
}

double KernelEvaluator::angular(double r, double rho) const {
  if (r < 0.0 || rho < 0.0) throw DomainError("angular kernel: radii must be nonnegative");
  if (r > rho) std::swap(r, rho);
  if (rho == r) throw DomainError("angular kernel: singular on the diagonal r == rho");
  const int n = order_.dim();
  const double s = order_.s();
  const double m = 0.5 * (n + 2.0 * s);
  if (r == 0.0) return sphere_nm1_ * std::pow(rho, -2.0 * m);
  const double d = rho - r;
  if (d < near_diag_delta_) return angular_asymptotic(r, rho);

  // peak width of the integrand at theta = 0
  const double w = d / std::sqrt(r * rho);
  int panels = 6;
  if (w < kPi) {
    const double need = std::pow(2.0 * kPi / w, 1.0 / angular_.grading);
    panels = std::clamp(static_cast<int>(std::ceil(need)), 6, angular_.max_panels);
  }
  const GaussRule& g = gauss_rule(angular_.nodes);
  const double d2 = d * d;
  const double four_rr = 4.0 * r * rho;
  auto f = [&](double th) {
    const double sh = std::sin(0.5 * th);
    const double q = d2 + four_rr * sh * sh;
    const double base = std::pow(q, -m);
    if (n == 2) return base;
    if (n == 3) return std::sin(th) * base;
    return std::pow(std::sin(th), n - 2) * base;
  };
  double total = 0.0;
  double prev = 0.0;
  for (int j = 1; j <= panels; ++j) {
    const double bnd = kPi * std::pow(static_cast<double>(j) / panels, angular_.grading);
    total += gauss_panel(g, prev, bnd, f);
    prev = bnd;
  }
  return sphere_nm2_ * total;
}

double KernelEvaluator::phi(double r) const {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("phi: radius must lie in [0,1)");
  const int n = order_.dim();
  const double s = order_.s();
  const GaussRule& g = gauss_rule(12);
  auto f = [&](double rho) { return std::pow(rho, n - 1) * angular(r, rho); };
  // geometric panels from rho = 1 outward; first width tied to the gap 1-r
  double lo = 1.0;
  double width = std::max(0.5 * (1.0 - r), 1e-7);
  double total = 0.0;
  while (lo < tail_cutoff_) {
    const double hi = std::min(lo + width, tail_cutoff_);
    total += gauss_panel(g, lo, hi, f);
    lo = hi;
    width *= 2.0;
  }
  // analytic tail: rho^{N-1} J ~ |S^{N-1}| rho^{-1-2s} for rho >> 1
  total += sphere_nm1_ * std::pow(tail_cutoff_, -2.0 * s) / (2.0 * s);
  return total;
}

std::uint64_t KernelEvaluator::hash() const {
  std::uint64_t h = angular_.hash();
  h = hash_mix(h, hash_double(order_.s()));
  h = hash_mix(h, static_cast<std::uint64_t>(order_.dim()));
  h = hash_mix(h, hash_double(tail_cutoff_));
  h = hash_mix(h, hash_double(near_diag_delta_));
  return h;
}

}  // namespace regfrac
