#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "regfrac/grid.hpp"
#include "regfrac/kernel.hpp"
#include "regfrac/types.hpp"

namespace regfrac {

// Radial quadrature controls for operator assembly.
struct AssemblyQuadrature {
  int panel_nodes = 12;       // Gauss nodes per radial subpanel (>= 4)
  double delta_min = 1e-8;    // innermost boundary of the singular grading
  double level_ratio = 0.5;   // geometric ratio of the singular levels
  double far_rel_width = 0.5; // subpanel width <= far_rel_width * distance
  AngularQuadrature angular;

  void validate() const;
  std::uint64_t hash() const;
};

struct QuadratureMeta {
  int panel_nodes = 0;
  int max_singular_levels = 0;
  long long kernel_evaluations = 0;
};

// Dense nodal approximation of c_{N,s} p.v. int_0^1 (u(r_i)-u(rho)) rho^{N-1}
// J(r_i,rho) drho on piecewise-linear radial profiles.
//
// Rows are assembled by collocation with panels graded toward rho = r_i; the
// two panels adjacent to r_i integrate in the offset variable delta with
// geometric levels down to delta_min and mirrored node pairs r_i +- delta_q,
// which cancels the odd singular part (the principal value at s = 1/2).
// Within the paired zone the integrand uses the local three-point quadratic
// model of the profile (the hat interpolant's kink at r_i has no principal
// value at s = 1/2); everywhere else the hat interpolant itself is used.
//
// The assembled table is the symmetrization of the collocation rows in the
// ball-weighted inner product: B = Sym(D_w A), diag(B) := -offdiag row sums,
// entries(i,j) = B(i,j)/w_i. This keeps exact zero row sums, the Z sign
// pattern, and makes the ball-quadrature adjoint identity exact, so solve
// outputs satisfy the discrete mass identity to rounding.
//
// Immutable and freely shareable once assembled; rows are built concurrently.
class OperatorMatrix {
 public:
  const RadialGrid& grid() const { return *grid_; }
  std::shared_ptr<const RadialGrid> grid_ptr() const { return grid_; }
  const FracOrder& order() const { return order_; }
  const AssemblyQuadrature& quadrature() const { return quad_; }
  const QuadratureMeta& quadrature_meta() const { return meta_; }

  int size() const { return grid_->node_count(); }

  // entry of the nodal table A = D_w^{-1} B
  double entry(int i, int j) const { return sym_(i, j) / weights_[i]; }
  double row_sum(int i) const;

  // symmetric ball-weighted form B (PSD, zero row sums) and the weights
  const Eigen::MatrixXd& weighted_form() const { return sym_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  RadialProfile apply(const RadialProfile& u) const;

  // 1/2 u^T B u : the ball-weighted double-integral seminorm of the profile
  double seminorm_sq(const RadialProfile& u) const;

  std::uint64_t key_hash() const;

  friend OperatorMatrix assemble_operator(std::shared_ptr<const RadialGrid>,
                                          const FracOrder&, const AssemblyQuadrature&);
  friend OperatorMatrix load_matrix_cache(const std::string&);

 private:
  OperatorMatrix() : order_(0.5, 2) {}
  std::shared_ptr<const RadialGrid> grid_;
  FracOrder order_;
  AssemblyQuadrature quad_;
  QuadratureMeta meta_;
  Eigen::MatrixXd sym_;       // B, symmetric
  Eigen::VectorXd weights_;   // w
};

OperatorMatrix assemble_operator(std::shared_ptr<const RadialGrid> grid,
                                 const FracOrder& order,
                                 const AssemblyQuadrature& quad = {});

// Max over interior nodes (r_i <= interior_cut) of
//   |(A u)_i + c_{N,s} phi(r_i) u_i - L_i| ,
// where L is the caller's full-space evaluation of the operator on the zero
// extension of u. Requires u(1) = 0.
double extension_identity_residual(const OperatorMatrix& A, const KernelEvaluator& ke,
                                   const RadialProfile& u,
                                   const std::function<double(double)>& full_space,
                                   double interior_cut = 0.9);

// Same check against the closed form for u = (1-r^2)^s, whose full-space
// image is the constant 2^{2s} Gamma(N/2+s) Gamma(1+s) / Gamma(N/2).
double dyda_constant(const FracOrder& order);
double dyda_residual(const OperatorMatrix& A, const KernelEvaluator& ke,
                     double interior_cut = 0.9);

// Binary cache: text header line with the key fields, then row-major IEEE
// doubles (little-endian) of the nodal table, then the ball weights.
void save_matrix_cache(const std::string& path, const OperatorMatrix& m);
OperatorMatrix load_matrix_cache(const std::string& path);

}  // namespace regfrac
