#pragma once

#include <cstdint>

#include "regfrac/types.hpp"

namespace regfrac {

// Angular quadrature for the collision kernel: fixed Gauss order per panel,
// panels clustered at theta = 0 with a power grading.
struct AngularQuadrature {
  int nodes = 16;          // Gauss nodes per theta-panel (>= 4)
  double grading = 3.0;    // panel clustering exponent at theta = 0
  int max_panels = 200;    // cap on the panel count for near-diagonal pairs

  void validate() const;
  std::uint64_t hash() const;
};

// Evaluates the scalar kernels attached to a fractional order:
//   normalization()        c_{N,s} = 2^{2s} s Gamma((N+2s)/2) / (pi^{N/2} Gamma(1-s))
//   angular(r, rho)        J(r,rho) = |S^{N-2}| int_0^pi sin^{N-2}t (r^2+rho^2-2 r rho cos t)^{-(N+2s)/2} dt
//   phi(r)                 int_1^inf rho^{N-1} J(r,rho) drho   (bare outer potential)
//   killing_potential(r)   c_{N,s} * phi(r)
//   boundary_constant()    c1 = lim_{r->1} phi(r) (1-r)^{2s}, closed form
//
// Immutable after construction; all evaluations are pure and thread-safe.
class KernelEvaluator {
 public:
  explicit KernelEvaluator(FracOrder order, AngularQuadrature angular = {},
                           double tail_cutoff = 1.0e3, double near_diag_delta = 1.0e-6);

  const FracOrder& order() const { return order_; }
  const AngularQuadrature& angular_quadrature() const { return angular_; }
  double tail_cutoff() const { return tail_cutoff_; }
  double near_diag_delta() const { return near_diag_delta_; }

  double normalization() const { return c_ns_; }

  // J(r,rho); symmetric, finite and positive for r != rho. Throws on r == rho
  // (diagonal singularity) and on negative input.
  double angular(double r, double rho) const;

  // Closed asymptotic form |S^{N-2}| (r rho)^{-(N-1)/2} I_{N,s} |r-rho|^{-1-2s};
  // used internally below near_diag_delta, exposed for validation.
  double angular_asymptotic(double r, double rho) const;

  // I_{N,s} = int_0^inf t^{N-2} (1+t^2)^{-(N+2s)/2} dt (closed Beta form).
  double profile_integral() const { return profile_integral_; }

  // Bare outer potential phi(r) for r in [0,1); strictly decreasing in r.
  double phi(double r) const;

  double killing_potential(double r) const { return c_ns_ * phi(r); }

  // c1 = (1/2s) |S^{N-2}| I_{N,s}.
  double boundary_constant() const { return c1_; }

  std::uint64_t hash() const;

 private:
  FracOrder order_;
  AngularQuadrature angular_;
  double tail_cutoff_;
  double near_diag_delta_;
  double c_ns_;
  double profile_integral_;
  double c1_;
  double sphere_nm1_;  // |S^{N-1}|
  double sphere_nm2_;  // |S^{N-2}|
};

// c_{N,s} without constructing an evaluator.
double normalization_constant(const FracOrder& order);

}  // namespace regfrac
