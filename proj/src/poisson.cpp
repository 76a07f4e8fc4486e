#include "regfrac/poisson.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "regfrac/special.hpp"

namespace regfrac {

namespace {

// Solve (A+I)u = F restricted to `active` nodes (others pinned to zero),
// through the symmetric ball-weighted form: (B + D_w) u = D_w F, which is SPD.
std::vector<double> solve_active(const OperatorMatrix& A, const RadialProfile& F,
                                 const std::vector<int>& active) {
  const Eigen::MatrixXd& B = A.weighted_form();
  const Eigen::VectorXd& w = A.weights();
  const int k = static_cast<int>(active.size());
  Eigen::MatrixXd S(k, k);
  Eigen::VectorXd rhs(k);
  for (int a = 0; a < k; ++a) {
    const int i = active[a];
    for (int b = 0; b < k; ++b) S(a, b) = B(i, active[b]);
    S(a, a) += w[i];
    rhs[a] = w[i] * F[i];
  }
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  Eigen::VectorXd x;
  if (llt.info() == Eigen::Success) {
    x = llt.solve(rhs);
  } else {
    // cannot happen for a Z-matrix plus identity; report through LDLT anyway
    Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
    if (ldlt.info() != Eigen::Success)
      throw UsageError("solve: factorization of the reduced system failed");
    x = ldlt.solve(rhs);
  }
  std::vector<double> u(A.size(), 0.0);
  for (int a = 0; a < k; ++a) u[active[a]] = x[a];
  return u;
}

double linear_residual_on(const OperatorMatrix& A, const std::vector<double>& u,
                          const RadialProfile& F, const std::vector<int>& active) {
  const Eigen::MatrixXd& B = A.weighted_form();
  const Eigen::VectorXd& w = A.weights();
  Eigen::Map<const Eigen::VectorXd> uv(u.data(), A.size());
  Eigen::VectorXd Bu = B * uv;
  double worst = 0.0;
  for (int i : active)
    worst = std::max(worst, std::abs(Bu[i] / w[i] + u[i] - F[i]));
  return worst;
}

void require_nonnegative(const RadialProfile& F) {
  if (F.min_value() < 0.0)
    throw PreconditionError("source must be nonnegative");
}

}  // namespace

FullBallSolver::FullBallSolver(const OperatorMatrix& A) : A_(&A) {
  Eigen::MatrixXd S = A.weighted_form();
  S.diagonal() += A.weights();
  llt_.compute(S);
  if (llt_.info() != Eigen::Success)
    throw UsageError("FullBallSolver: factorization failed");
}

RadialProfile FullBallSolver::solve(const RadialProfile& F) const {
  if (!F.grid().same_as(A_->grid())) throw UsageError("solve: grid mismatch");
  Eigen::Map<const Eigen::VectorXd> fv(F.values().data(), A_->size());
  Eigen::VectorXd rhs = A_->weights().asDiagonal() * fv;
  Eigen::VectorXd x = llt_.solve(rhs);
  return RadialProfile(A_->grid_ptr(), std::vector<double>(x.data(), x.data() + A_->size()));
}

double FullBallSolver::linear_residual(const RadialProfile& u,
                                       const RadialProfile& F) const {
  Eigen::Map<const Eigen::VectorXd> uv(u.values().data(), A_->size());
  Eigen::VectorXd Bu = A_->weighted_form() * uv;
  double worst = 0.0;
  for (int i = 0; i < A_->size(); ++i)
    worst = std::max(worst, std::abs(Bu[i] / A_->weights()[i] + u[i] - F[i]));
  return worst;
}

void PoissonSpec::validate() const {
  if (!(truncation_radius > 0.0) || truncation_radius > 1.0)
    throw ConfigError("truncation radius must lie in (0,1]");
  if (!(tolerance > 0.0)) throw ConfigError("solver tolerance must be positive");
}

MonotonicityFlags radial_monotonicity(const RadialProfile& u, bool non_constant_source,
                                      double slack) {
  MonotonicityFlags f;
  f.nonincreasing = true;
  f.strictly_decreasing = non_constant_source;
  const auto& r = u.grid().nodes();
  for (int i = 0; i + 1 < u.size(); ++i) {
    const double diff = u[i + 1] - u[i];
    if (diff > slack) f.nonincreasing = false;
    if (r[i] >= 0.05 && r[i + 1] <= 0.95 && diff >= -1e-12) f.strictly_decreasing = false;
  }
  if (!non_constant_source) f.strictly_decreasing = false;
  return f;
}

SolveReport solve_truncated(const OperatorMatrix& A, const RadialProfile& F,
                            const PoissonSpec& spec) {
  spec.validate();
  A.order().require_solver_range(spec.allow_large_s);
  if (!(spec.truncation_radius < 1.0))
    throw UsageError("solve_truncated: needs r0 < 1 (use solve_full for r0 = 1)");
  if (!F.grid().same_as(A.grid())) throw UsageError("solve_truncated: grid mismatch");
  require_nonnegative(F);

  std::vector<int> active;
  for (int i = 0; i < A.size(); ++i)
    if (A.grid().node(i) < spec.truncation_radius) active.push_back(i);
  if (active.empty()) throw ConfigError("solve_truncated: no nodes inside r0");

  auto u = solve_active(A, F, active);
  SolveReport rep(RadialProfile(A.grid_ptr(), std::move(u)));
  rep.linear_residual = linear_residual_on(A, rep.solution.values(), F, active);
  rep.boundary_level = rep.solution[A.size() - 1];  // zero by the pin
  const bool non_const = F.max_value() - F.min_value() > 1e-12;
  rep.monotonicity = radial_monotonicity(rep.solution, non_const);
  rep.energy = energy_functional(A, rep.solution, F);
  return rep;
}

SolveReport solve_full(const OperatorMatrix& A, const RadialProfile& F,
                       const PoissonSpec& spec) {
  spec.validate();
  A.order().require_solver_range(spec.allow_large_s);
  if (!F.grid().same_as(A.grid())) throw UsageError("solve_full: grid mismatch");
  require_nonnegative(F);

  std::vector<int> active(A.size());
  for (int i = 0; i < A.size(); ++i) active[i] = i;
  auto u = solve_active(A, F, active);
  SolveReport rep(RadialProfile(A.grid_ptr(), std::move(u)));
  rep.linear_residual = linear_residual_on(A, rep.solution.values(), F, active);
  rep.boundary_level = rep.solution[A.size() - 1];
  const bool non_const = F.max_value() - F.min_value() > 1e-12;
  rep.monotonicity = radial_monotonicity(rep.solution, non_const);
  rep.energy = energy_functional(A, rep.solution, F);
  const double d = rep.boundary_level;
  rep.mass_residual = std::abs(rep.solution.shifted(d).ball_integral() -
                               F.shifted(d).ball_integral());
  if (non_const) {
    const double avg = F.ball_integral() / ball_volume(A.grid().dim());
    rep.boundary_level_in_range = (d >= F.min_value() - 1e-8) && (d < avg + 1e-8);
  }
  return rep;
}

ShiftedReport shift_and_mass(const SolveReport& report, const RadialProfile& F) {
  const RadialProfile& u = report.solution;
  u.require_same_grid(F);
  const double d = u[u.size() - 1];
  ShiftedReport out{report, u.shifted(d), F.shifted(d), d, 0.0, true, ""};
  out.mass_residual =
      std::abs(out.shifted_solution.ball_integral() - out.shifted_source.ball_integral());
  const bool non_const = F.max_value() - F.min_value() > 1e-12;
  if (non_const) {
    const double avg = F.ball_integral() / ball_volume(u.grid().dim());
    const double lo = F.min_value();
    if (d < lo - 1e-8 || d > avg + 1e-8) {
      out.in_range = false;
      out.note = "boundary level outside [inf F, avg F)";
    } else if (d > avg - 1e-8) {
      out.note = "boundary level within slack of avg F: inconclusive";
    }
  } else {
    out.note = "constant source: boundary level equals the constant";
  }
  return out;
}

ExhaustionStudy exhaustion_study(const OperatorMatrix& A, const RadialProfile& F,
                                 const std::vector<double>& radii,
                                 const PoissonSpec& spec) {
  for (std::size_t k = 0; k + 1 < radii.size(); ++k)
    if (!(radii[k] < radii[k + 1]))
      throw UsageError("exhaustion_study: radii must be strictly increasing");
  for (double r0 : radii)
    if (!(r0 > 0.0 && r0 < 1.0))
      throw UsageError("exhaustion_study: radii must lie in (0,1)");

  PoissonSpec full = spec;
  full.truncation_radius = 1.0;
  ExhaustionStudy study{.entries = {},
                        .full_solution = solve_full(A, F, full).solution,
                        .all_monotone = true,
                        .distances_decreasing = true};
  const RadialProfile* prev = nullptr;
  double prev_dist = 0.0;
  for (double r0 : radii) {
    PoissonSpec trunc = spec;
    trunc.truncation_radius = r0;
    ExhaustionEntry e{r0, solve_truncated(A, F, trunc).solution, 0.0, true};
    e.sup_distance_to_full = sup_distance(e.solution, study.full_solution);
    if (prev) {
      for (int i = 0; i < e.solution.size(); ++i)
        if (e.solution[i] < (*prev)[i] - 1e-8) e.monotone_from_previous = false;
      if (e.sup_distance_to_full >= prev_dist) study.distances_decreasing = false;
    }
    study.all_monotone = study.all_monotone && e.monotone_from_previous;
    prev_dist = e.sup_distance_to_full;
    study.entries.push_back(std::move(e));
    prev = &study.entries.back().solution;
  }
  return study;
}

double energy_functional(const OperatorMatrix& A, const RadialProfile& u,
                         const RadialProfile& F) {
  if (!u.grid().same_as(A.grid()) )
    throw UsageError("energy_functional: profile grid mismatch");
  u.require_same_grid(F);
  const Eigen::VectorXd& w = A.weights();
  double quad = 0.5 * A.seminorm_sq(u);
  double l2 = 0.0, src = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    l2 += w[i] * u[i] * u[i];
    src += w[i] * F[i] * u[i];
  }
  return quad + 0.5 * l2 - src;
}

}  // namespace regfrac
