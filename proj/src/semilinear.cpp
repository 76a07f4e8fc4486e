#include "regfrac/semilinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regfrac/special.hpp"

namespace regfrac {

void SemilinearSpec::validate(const RadialProfile& h1, const RadialProfile& h2) const {
  if (!(p > 1.0)) throw ConfigError("semilinear exponent p must exceed 1");
  if (!(eps >= 0.0)) throw ConfigError("eps must be nonnegative");
  if (!(tolerance > 0.0)) throw ConfigError("iteration tolerance must be positive");
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  h1.require_same_grid(h2);
  const bool h1_zero = h1.max_value() == 0.0 && h1.min_value() == 0.0;
  if (!(h1.min_value() > 0.0) && !(allow_zero_h1 && h1_zero))
    throw PreconditionError("inf h1 must be positive");
  if (!(h2.min_value() > 0.0)) throw PreconditionError("inf h2 must be positive");
}

Thresholds compute_thresholds(const OperatorMatrix& A, const RadialProfile& h1,
                              const RadialProfile& h2, const RadialProfile& u_h1,
                              const SemilinearSpec& spec) {
  spec.validate(h1, h2);
  if (!(u_h1.min_value() > 0.0))
    throw PreconditionError("compute_thresholds: u_h1 must be strictly positive");
  const double p = spec.p;
  const double h1_sup = h1.max_value();
  const double h2_sup = h2.max_value();
  const double h1_inf = h1.min_value();
  const double h2_inf = h2.min_value();
  Thresholds t;
  t.t_p = std::pow(p * h1_sup, -1.0 / (p - 1.0));
  t.L_max = (p - 1.0) / p * t.t_p;
  t.eps_p = t.L_max / h2_sup;
  const double vol = ball_volume(A.grid().dim());
  const double h1_l1 = h1.ball_integral();  // h1 > 0
  t.eps_0 = std::pow(h1_l1, 1.0 / p) / (vol * h2_inf * h1_inf);
  const double q = 1.0 / (p - 1.0);
  const double num = u_h1.ball_integral_of(
      [&](double u, double r) { return h1.at(r) * std::pow(u, -q); });
  const double den = u_h1.ball_integral_of(
      [&](double u, double r) { return h2.at(r) * u; });
  t.eps_star_upper = num / den;
  return t;
}

IterationReport monotone_iteration(const OperatorMatrix& A, const RadialProfile& h1,
                                   const RadialProfile& h2, const SemilinearSpec& spec) {
  spec.validate(h1, h2);
  A.order().require_solver_range(spec.allow_large_s);
  FullBallSolver solver(A);

  RadialProfile u_h2 = solver.solve(h2);
  RadialProfile v = u_h2;
  v *= spec.eps;

  const double h1_sup = h1.max_value();
  const double h2_sup = h2.max_value();
  double t_p = 0.0, eps_p = 0.0;
  if (h1_sup > 0.0) {
    t_p = std::pow(spec.p * h1_sup, -1.0 / (spec.p - 1.0));
    eps_p = (spec.p - 1.0) / spec.p * t_p / h2_sup;
  }

  IterationReport rep(v);
  rep.min_step_increment = 0.0;
  if (h1_sup == 0.0) {
    // degenerate linear problem: converges in one step to eps * u_{h2}
    rep.converged = true;
    rep.iterations = 1;
    rep.sup_deltas.push_back(0.0);
    RadialProfile rhs = h2;
    rhs *= spec.eps;
    rep.linear_residual = solver.linear_residual(v, rhs);
    rep.boundary_level = rep.solution[rep.solution.size() - 1];
    rep.note = "h1 == 0: linear problem";
    return rep;
  }

  bool first = true;
  for (int it = 1; it <= spec.max_iterations; ++it) {
    RadialProfile rhs(A.grid_ptr(), 0.0);
    for (int i = 0; i < v.size(); ++i)
      rhs[i] = h1[i] * std::pow(v[i], spec.p) + spec.eps * h2[i];
    RadialProfile next = solver.solve(rhs);
    if (!std::isfinite(next.sup_norm())) {
      rep.iterations = it;
      rep.note = "iterates overflowed (divergence); no solution in reach";
      rep.sup_deltas.push_back(std::numeric_limits<double>::infinity());
      return rep;
    }
    double delta = 0.0, min_inc = std::numeric_limits<double>::infinity();
    for (int i = 0; i < v.size(); ++i) {
      const double inc = next[i] - v[i];
      delta = std::max(delta, std::abs(inc));
      min_inc = std::min(min_inc, inc);
    }
    rep.sup_deltas.push_back(delta);
    rep.min_step_increment = first ? min_inc : std::min(rep.min_step_increment, min_inc);
    first = false;
    v = next;
    if (delta < spec.tolerance || it == spec.max_iterations)
      rep.linear_residual = solver.linear_residual(v, rhs);
    rep.iterations = it;
    if (spec.eps <= eps_p && v.max_value() > 10.0 * t_p)
      throw UsageError("monotone_iteration: iterates exceeded 10 t_p below eps_p; "
                       "this contradicts the constant barrier");
    if (delta < spec.tolerance) {
      rep.converged = true;
      break;
    }
  }
  rep.solution = v;
  rep.boundary_level = v[v.size() - 1];
  if (!rep.converged)
    rep.note = "no convergence within max_iterations (expected above the existence range)";
  return rep;
}

BarrierFlags barrier_and_minimality(const OperatorMatrix& A, const RadialProfile& h1,
                                    const RadialProfile& h2, const SemilinearSpec& spec,
                                    const IterationReport& report,
                                    const Thresholds& thresholds) {
  if (!report.converged)
    throw PreconditionError("barrier_and_minimality: iteration did not converge");
  BarrierFlags flags;
  flags.barrier_applicable = spec.eps <= thresholds.eps_p;
  if (flags.barrier_applicable)
    flags.barrier_holds = report.solution.max_value() <= thresholds.t_p + 1e-8;

  // re-run from half the canonical start; the minimal fixed point is a limit
  // independent of starts below it
  FullBallSolver solver(A);
  RadialProfile v = solver.solve(h2);
  v *= 0.5 * spec.eps;
  bool converged = false;
  for (int it = 1; it <= spec.max_iterations; ++it) {
    RadialProfile rhs(A.grid_ptr(), 0.0);
    for (int i = 0; i < v.size(); ++i)
      rhs[i] = h1[i] * std::pow(v[i], spec.p) + spec.eps * h2[i];
    RadialProfile next = solver.solve(rhs);
    const double delta = sup_distance(next, v);
    v = next;
    if (delta < spec.tolerance) {
      converged = true;
      break;
    }
  }
  flags.perturbed_distance = sup_distance(v, report.solution);
  flags.minimality_confirmed = converged && flags.perturbed_distance <= 2.0 * spec.tolerance;
  return flags;
}

BoundaryLevelReport boundary_level_bounds(const IterationReport& report,
                                          const RadialProfile& h1, const RadialProfile& h2,
                                          const SemilinearSpec& spec) {
  if (!report.converged)
    throw PreconditionError("boundary_level_bounds: iteration did not converge");
  const RadialProfile& u = report.solution;
  const double d = u[u.size() - 1];
  BoundaryLevelReport out{d, 0.0, 0.0, false, u.shifted(d)};
  out.lower = spec.eps * h2.min_value();
  const double vol = ball_volume(u.grid().dim());
  const double h1_inf = h1.min_value();
  if (h1_inf > 0.0)
    out.upper = std::pow(h1.ball_integral() / (vol * h1_inf), 1.0 / spec.p);
  else
    out.upper = std::numeric_limits<double>::infinity();
  out.within_bounds = (d >= out.lower - 1e-8) && (d <= out.upper + 1e-8);
  return out;
}

}  // namespace regfrac
