#include "regfrac/verify.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <chrono>
#include <cmath>

#include "regfrac/poisson.hpp"
#include "regfrac/rng.hpp"
#include "regfrac/special.hpp"

namespace regfrac {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

int VerificationReport::passed() const {
  int n = 0;
  for (const auto& c : checks)
    if (c.status == CheckStatus::Pass) ++n;
  return n;
}

int VerificationReport::failed() const {
  int n = 0;
  for (const auto& c : checks)
    if (c.status == CheckStatus::Fail) ++n;
  return n;
}

CheckResult comparison_check(const OperatorMatrix& A, double r0, int trials,
                             std::uint64_t seed) {
  Stopwatch clock;
  CheckResult res;
  res.name = "comparison";
  res.property = "inverse positivity of the reduced (A+I): nonnegative sources "
                 "give nonnegative solutions";
  res.tolerance = -1e-10;
  if (trials < 1) throw UsageError("comparison_check: trials must be >= 1");
  Xoshiro256Plus rng(seed);
  PoissonSpec spec;
  spec.truncation_radius = r0;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    RadialProfile g(A.grid_ptr(), 0.0);
    for (int i = 0; i < g.size(); ++i) g[i] = rng.next_double();
    SolveReport rep = solve_truncated(A, g, spec);
    worst = std::min(worst, rep.solution.min_value());
  }
  res.measured = worst;
  res.status = (worst >= -1e-10) ? CheckStatus::Pass : CheckStatus::Fail;
  res.detail = "min nodal value over " + std::to_string(trials) + " seeded trials";
  res.runtime_seconds = clock.seconds();
  return res;
}

std::vector<NodeSet> annular_node_sets(const RadialGrid& grid,
                                       const std::vector<double>& measure_fractions) {
  // annuli centred near r = 0.5 whose ball measure matches the requested
  // fraction: measure = |B_1| (b^N - a^N) with b, a symmetric about 0.5
  std::vector<NodeSet> sets;
  const int n = grid.dim();
  for (double frac : measure_fractions) {
    const double target = frac;  // fraction of |B_1|
    double lo = 0.0, hi = 0.5;
    // solve (0.5+h)^N - (0.5-h)^N = target for the half-width h
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double v = std::pow(0.5 + mid, n) - std::pow(0.5 - mid, n);
      (v < target ? lo : hi) = mid;
    }
    const double h = 0.5 * (lo + hi);
    NodeSet set;
    set.label = "annulus measure " + std::to_string(frac) + "|B1|";
    for (int i = 0; i < grid.node_count(); ++i)
      if (grid.node(i) >= 0.5 - h && grid.node(i) <= 0.5 + h) set.indices.push_back(i);
    sets.push_back(std::move(set));
  }
  return sets;
}

CheckResult abp_scaling_check(const OperatorMatrix& A, const std::vector<NodeSet>& sets,
                              std::uint64_t seed, double max_spread, int trials_per_set) {
  Stopwatch clock;
  CheckResult res;
  res.name = "abp-scaling";
  res.property = "boundedness of -inf w / (||g||_inf |O|^{2s/N}) across set scales";
  res.tolerance = max_spread;
  Xoshiro256Plus rng(seed);
  const Eigen::MatrixXd& B = A.weighted_form();
  const Eigen::VectorXd& w = A.weights();
  const double s = A.order().s();
  const int n = A.grid().dim();

  std::vector<double> ratios;
  std::string skipped;
  for (const auto& set : sets) {
    if (set.indices.empty()) {
      skipped += set.label + " skipped (empty); ";
      continue;
    }
    if (static_cast<int>(set.indices.size()) == A.size())
      throw UsageError("abp_scaling_check: the complement of a set must be nonempty");
    double measure = 0.0;
    for (int i : set.indices) measure += w[i];
    if (!(measure > 0.0)) {
      skipped += set.label + " skipped (measure 0); ";
      continue;
    }
    const int k = static_cast<int>(set.indices.size());
    Eigen::MatrixXd S(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) S(a, b) = B(set.indices[a], set.indices[b]);
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success)
      throw UsageError("abp_scaling_check: reduced form not positive definite");
    double worst_ratio = 0.0;
    for (int t = 0; t < trials_per_set; ++t) {
      Eigen::VectorXd rhs(k);
      double g_sup = 0.0;
      for (int a = 0; a < k; ++a) {
        const double gval = rng.uniform(-1.0, 1.0);
        g_sup = std::max(g_sup, std::abs(gval));
        rhs[a] = w[set.indices[a]] * gval;
      }
      Eigen::VectorXd x = llt.solve(rhs);
      const double neg = std::max(0.0, -x.minCoeff());
      const double bound = g_sup * std::pow(measure, 2.0 * s / n);
      worst_ratio = std::max(worst_ratio, neg / bound);
    }
    ratios.push_back(worst_ratio);
  }
  if (ratios.empty()) {
    res.status = CheckStatus::Skipped;
    res.detail = "no usable sets; " + skipped;
    res.runtime_seconds = clock.seconds();
    return res;
  }
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  const double floor = 1e-14;
  res.measured = (hi == 0.0) ? 0.0 : hi / std::max(lo, floor);
  res.status = (res.measured <= max_spread) ? CheckStatus::Pass : CheckStatus::Fail;
  res.detail = "ratio spread over " + std::to_string(ratios.size()) + " sets; " + skipped;
  res.runtime_seconds = clock.seconds();
  return res;
}

CheckResult radial_monotonicity_check(const RadialProfile& u, bool strict_interior,
                                      bool non_constant_source) {
  Stopwatch clock;
  CheckResult res;
  res.name = "radial-monotonicity";
  res.property = "radial profiles are nonincreasing (strictly decreasing in the "
                 "interior for non-constant sources)";
  res.tolerance = 1e-10;
  MonotonicityFlags f = radial_monotonicity(u, non_constant_source);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < u.size(); ++i) worst = std::max(worst, u[i + 1] - u[i]);
  res.measured = worst;
  if (!f.nonincreasing) {
    res.status = CheckStatus::Fail;
    res.detail = "consecutive nodal difference above slack";
  } else if (strict_interior && !non_constant_source) {
    res.status = CheckStatus::Inconclusive;
    res.detail = "strict decrease not applicable: constant source";
  } else if (strict_interior && !f.strictly_decreasing) {
    res.status = CheckStatus::Fail;
    res.detail = "no strict decrease on the interior band";
  } else {
    res.status = CheckStatus::Pass;
  }
  res.runtime_seconds = clock.seconds();
  return res;
}

DydaCheck dyda_oracle_check(const FracOrder& order, const std::vector<int>& m_list,
                            double beta, const AssemblyQuadrature& quad,
                            double rel_tolerance, double min_ratio) {
  for (std::size_t k = 0; k + 1 < m_list.size(); ++k)
    if (!(m_list[k] < m_list[k + 1]))
      throw UsageError("dyda_oracle_check: M list must be increasing");
  Stopwatch clock;
  DydaCheck out;
  out.m_values = m_list;
  out.result.name = "extension-identity";
  out.result.property = "(A u)_i + c_{N,s} phi(r_i) u_i reproduces the closed-form "
                        "constant for u = (1-r^2)^s";
  const double B = dyda_constant(order);
  out.result.tolerance = rel_tolerance * B;
  KernelEvaluator ke(order, quad.angular);
  for (int M : m_list) {
    auto grid = std::make_shared<RadialGrid>(M, beta, order.dim());
    OperatorMatrix A = assemble_operator(grid, order, quad);
    out.residuals.push_back(dyda_residual(A, ke));
  }
  for (std::size_t k = 0; k + 1 < out.residuals.size(); ++k)
    out.ratios.push_back(out.residuals[k] / out.residuals[k + 1]);
  out.result.measured = out.residuals.back();
  bool ok = out.residuals.back() <= out.result.tolerance;
  for (double r : out.ratios) ok = ok && r >= min_ratio;
  out.result.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  out.result.detail = "residual at the finest level; ratios between levels must stay >= " +
                      std::to_string(min_ratio);
  out.result.runtime_seconds = clock.seconds();
  return out;
}

}  // namespace regfrac
