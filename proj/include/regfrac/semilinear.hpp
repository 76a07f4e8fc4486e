#pragma once

#include <string>
#include <vector>

#include "regfrac/assembly.hpp"
#include "regfrac/grid.hpp"
#include "regfrac/poisson.hpp"

namespace regfrac {

// Inputs for the semilinear problem (A + I) u = h1 u^p + eps h2.
struct SemilinearSpec {
  double p = 2.0;
  double eps = 0.1;
  double tolerance = 1e-10;
  int max_iterations = 500;
  bool allow_large_s = false;
  bool allow_zero_h1 = false;  // degenerate override: h1 == 0 gives the linear problem

  void validate(const RadialProfile& h1, const RadialProfile& h2) const;
};

struct Thresholds {
  double t_p = 0.0;             // (p ||h1||_inf)^{-1/(p-1)}
  double L_max = 0.0;           // ((p-1)/p) t_p
  double eps_p = 0.0;           // L_max / ||h2||_inf
  double eps_0 = 0.0;           // (|B1| inf h2 inf h1)^{-1} ||h1||_{L1}^{1/p}
  double eps_star_upper = 0.0;  // int h1 u_{h1}^{-1/(p-1)} / int h2 u_{h1}
};

// u_h1 must come from solve_full with source h1 and be strictly positive.
Thresholds compute_thresholds(const OperatorMatrix& A, const RadialProfile& h1,
                              const RadialProfile& h2, const RadialProfile& u_h1,
                              const SemilinearSpec& spec);

struct IterationReport {
  RadialProfile solution;
  bool converged = false;
  int iterations = 0;
  std::vector<double> sup_deltas;    // ||v_n - v_{n-1}||_inf per step
  double min_step_increment = 0.0;   // min over nodes and steps of v_{n+1}-v_n
  double boundary_level = 0.0;
  double linear_residual = 0.0;      // of the last linear solve
  std::string note;

  explicit IterationReport(RadialProfile u) : solution(std::move(u)) {}
};

// v_0 = eps * solve_full(h2); v_n = solve_full(h1 v_{n-1}^p + eps h2).
// Iterates are pointwise nondecreasing; convergence when the sup-norm of the
// increments drops below tolerance. Non-convergence after max_iterations is
// reported, not thrown. Divergence past 10 t_p while eps <= eps_p throws
// (it contradicts the constant barrier).
IterationReport monotone_iteration(const OperatorMatrix& A, const RadialProfile& h1,
                                   const RadialProfile& h2, const SemilinearSpec& spec);

struct BarrierFlags {
  bool barrier_holds = true;      // u_eps <= t_p + 1e-8 when eps <= eps_p
  bool barrier_applicable = false;
  bool minimality_confirmed = false;  // perturbed start reaches the same limit
  double perturbed_distance = 0.0;
};
BarrierFlags barrier_and_minimality(const OperatorMatrix& A, const RadialProfile& h1,
                                    const RadialProfile& h2, const SemilinearSpec& spec,
                                    const IterationReport& report,
                                    const Thresholds& thresholds);

struct BoundaryLevelReport {
  double d_eps = 0.0;
  double lower = 0.0;  // eps inf h2
  double upper = 0.0;  // (||h1||_L1 / (|B1| inf h1))^{1/p}
  bool within_bounds = false;
  RadialProfile shifted;  // w_eps = u_eps - d_eps
};
BoundaryLevelReport boundary_level_bounds(const IterationReport& report,
                                          const RadialProfile& h1, const RadialProfile& h2,
                                          const SemilinearSpec& spec);

}  // namespace regfrac
