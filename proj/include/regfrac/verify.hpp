#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regfrac/assembly.hpp"
#include "regfrac/grid.hpp"

namespace regfrac {

enum class CheckStatus { Pass, Fail, Inconclusive, Skipped };

struct CheckResult {
  std::string name;
  std::string property;  // the mathematical property under test
  CheckStatus status = CheckStatus::Skipped;
  double measured = 0.0;
  double tolerance = 0.0;
  double runtime_seconds = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  int passed() const;
  int failed() const;
  bool all_passed() const { return failed() == 0; }
};

// Inverse positivity of the reduced (A + I): seeded random nonnegative
// sources on the truncated problem must produce nonnegative solutions.
CheckResult comparison_check(const OperatorMatrix& A, double r0, int trials,
                             std::uint64_t seed);

// Boundedness of -inf w / (||g||_inf |O|^{2s/N}) across node sets O whose
// measures span at least two decades; bounded spread, not a specific constant.
struct NodeSet {
  std::string label;
  std::vector<int> indices;
};
CheckResult abp_scaling_check(const OperatorMatrix& A, const std::vector<NodeSet>& sets,
                              std::uint64_t seed, double max_spread = 10.0,
                              int trials_per_set = 8);

// Annular node sets with ball measures measure_fractions * |B_1|.
std::vector<NodeSet> annular_node_sets(const RadialGrid& grid,
                                       const std::vector<double>& measure_fractions);

// Nodal radial monotonicity; strict decrease on 0.05 <= r <= 0.95 when asked.
CheckResult radial_monotonicity_check(const RadialProfile& u, bool strict_interior,
                                      bool non_constant_source);

// Extension-identity residuals over an M list; reports the residual per M and
// the ratio between successive levels.
struct DydaCheck {
  CheckResult result;
  std::vector<int> m_values;
  std::vector<double> residuals;
  std::vector<double> ratios;
};
DydaCheck dyda_oracle_check(const FracOrder& order, const std::vector<int>& m_list,
                            double beta, const AssemblyQuadrature& quad,
                            double rel_tolerance = 1e-2, double min_ratio = 1.7);

}  // namespace regfrac
