#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "regfrac/types.hpp"

namespace regfrac {

// Graded radial collocation nodes on [0,1]: r_i = 1 - ((M-i)/M)^beta.
// r_0 = 0, r_M = 1, strictly increasing; beta >= 1 clusters nodes at r = 1.
class RadialGrid {
 public:
  RadialGrid(int node_intervals, double beta, int dim);

  int intervals() const { return m_; }                 // M
  int node_count() const { return m_ + 1; }            // M + 1
  double beta() const { return beta_; }
  int dim() const { return dim_; }
  double node(int i) const { return nodes_[i]; }
  const std::vector<double>& nodes() const { return nodes_; }

  // |S^{N-1}| int phi_i(r) r^{N-1} dr : exact ball-quadrature weights of the
  // piecewise-linear hat functions. Strictly positive; sums to |B_1|.
  const std::vector<double>& ball_weights() const { return weights_; }

  bool same_as(const RadialGrid& o) const {
    return m_ == o.m_ && beta_ == o.beta_ && dim_ == o.dim_;
  }

 private:
  int m_;
  double beta_;
  int dim_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// Nodal values on a RadialGrid; between nodes the profile is the linear
// interpolant. Ball integrals are exact per-segment quadrature of that
// interpolant.
class RadialProfile {
 public:
  RadialProfile(std::shared_ptr<const RadialGrid> grid, std::vector<double> values);
  RadialProfile(std::shared_ptr<const RadialGrid> grid, double constant);
  RadialProfile(std::shared_ptr<const RadialGrid> grid,
                const std::function<double(double)>& f);

  const RadialGrid& grid() const { return *grid_; }
  std::shared_ptr<const RadialGrid> grid_ptr() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double operator[](int i) const { return values_[i]; }
  double& operator[](int i) { return values_[i]; }
  int size() const { return static_cast<int>(values_.size()); }

  // Linear interpolation at radius r in [0,1].
  double at(double r) const;

  // int_{B_1} u dx = |S^{N-1}| int_0^1 u(r) r^{N-1} dr, exact for the
  // interpolant.
  double ball_integral() const;

  // int_{B_1} f(u(r), r) dx by fixed per-segment Gauss quadrature of the
  // interpolant (for integrands that are not piecewise linear).
  double ball_integral_of(const std::function<double(double, double)>& f) const;

  double min_value() const;
  double max_value() const;
  double sup_norm() const;

  RadialProfile& operator+=(const RadialProfile& o);
  RadialProfile& operator-=(const RadialProfile& o);
  RadialProfile& operator*=(double a);
  RadialProfile shifted(double c) const;  // u - c

  void require_same_grid(const RadialProfile& o) const;

 private:
  std::shared_ptr<const RadialGrid> grid_;
  std::vector<double> values_;
};

double sup_distance(const RadialProfile& a, const RadialProfile& b);

}  // namespace regfrac
