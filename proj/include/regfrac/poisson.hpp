#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regfrac/assembly.hpp"
#include "regfrac/grid.hpp"

namespace regfrac {

// Inputs for the linear solves (A + I) u = F.
struct PoissonSpec {
  double truncation_radius = 1.0;  // r0 in (0,1]; 1 means the whole ball
  double tolerance = 1e-10;        // bound demanded of the linear residual
  bool allow_large_s = false;

  void validate() const;
};

struct MonotonicityFlags {
  bool nonincreasing = false;       // consecutive nodal differences <= slack
  bool strictly_decreasing = false; // strict decrease on 0.05 <= r <= 0.95
};

struct SolveReport {
  RadialProfile solution;
  double boundary_level = 0.0;   // d = u(r_M)
  double mass_residual = 0.0;    // | int (u - d) - int (F - d) |
  double linear_residual = 0.0;  // ||(A+I)u - F||_inf over solved nodes
  double energy = 0.0;           // discrete J_s(u)
  MonotonicityFlags monotonicity;
  bool boundary_level_in_range = true;  // inf F <= d < avg F (when applicable)
  std::string note;

  explicit SolveReport(RadialProfile u) : solution(std::move(u)) {}
};

// (A+I) on the whole ball through the symmetric ball-weighted form
// (B + D_w) u = D_w F, factored once and reused across solves.
class FullBallSolver {
 public:
  explicit FullBallSolver(const OperatorMatrix& A);
  RadialProfile solve(const RadialProfile& F) const;
  double linear_residual(const RadialProfile& u, const RadialProfile& F) const;
  const OperatorMatrix& matrix() const { return *A_; }

 private:
  const OperatorMatrix* A_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

// Truncated problem: (A+I)u = F on nodes with r_i < r0, u = 0 on r_i >= r0.
// F must be nonnegative. The solution is nonnegative.
SolveReport solve_truncated(const OperatorMatrix& A, const RadialProfile& F,
                            const PoissonSpec& spec);

// Whole-ball problem: (A+I)u = F on all nodes, no boundary pin.
SolveReport solve_full(const OperatorMatrix& A, const RadialProfile& F,
                       const PoissonSpec& spec = {});

// Reads d = u(r_M), forms u - d and F - d, records the mass residual and
// checks inf F <= d < avg F for non-constant F (slack 1e-8; equality within
// slack on the upper end is reported inconclusive via `note`).
struct ShiftedReport {
  SolveReport base;
  RadialProfile shifted_solution;  // u - d
  RadialProfile shifted_source;    // F - d
  double boundary_level;
  double mass_residual;
  bool in_range;
  std::string note;
};
ShiftedReport shift_and_mass(const SolveReport& report, const RadialProfile& F);

// Truncated solves over an increasing radius list; checks pointwise
// monotonicity in r0 and that the sup-distance to the full solve decreases.
struct ExhaustionEntry {
  double radius;
  RadialProfile solution;
  double sup_distance_to_full;
  bool monotone_from_previous;
};
struct ExhaustionStudy {
  std::vector<ExhaustionEntry> entries;
  RadialProfile full_solution;
  bool all_monotone;
  bool distances_decreasing;
};
ExhaustionStudy exhaustion_study(const OperatorMatrix& A, const RadialProfile& F,
                                 const std::vector<double>& radii,
                                 const PoissonSpec& spec);

// Discrete energy 1/2 ||u||^2 - int F u whose Euler equation is the solve:
// 1/2 u^T B u + 1/2 sum w_i u_i^2 - sum w_i F_i u_i.
double energy_functional(const OperatorMatrix& A, const RadialProfile& u,
                         const RadialProfile& F);

MonotonicityFlags radial_monotonicity(const RadialProfile& u, bool non_constant_source,
                                      double slack = 1e-10);

}  // namespace regfrac
