#include "regfrac/grid.hpp"

#include <algorithm>
#include <cmath>

#include "regfrac/quadrature.hpp"
#include "regfrac/special.hpp"

namespace regfrac {

RadialGrid::RadialGrid(int node_intervals, double beta, int dim)
    : m_(node_intervals), beta_(beta), dim_(dim) {
  if (m_ < 8) throw ConfigError("RadialGrid: M must be >= 8");
  if (m_ > 4096) throw ConfigError("RadialGrid: M must be <= 4096 (dense storage)");
  if (beta_ < 1.0) throw ConfigError("RadialGrid: grading beta must be >= 1");
  if (dim_ < 2) throw ConfigError("RadialGrid: dim must be >= 2");
  nodes_.resize(m_ + 1);
  for (int i = 0; i <= m_; ++i)
    nodes_[i] = 1.0 - std::pow(static_cast<double>(m_ - i) / m_, beta_);
  nodes_[0] = 0.0;
  nodes_[m_] = 1.0;
  for (int i = 0; i < m_; ++i)
    if (!(nodes_[i] < nodes_[i + 1]))
      throw ConfigError("RadialGrid: nodes must be strictly increasing (duplicate node)");

  // hat-function ball weights, exact for polynomials times r^{N-1}
  weights_.assign(m_ + 1, 0.0);
  const double S = sphere_area(dim_);
  const GaussRule& g = gauss_rule(8);
  for (int p = 0; p < m_; ++p) {
    const double a = nodes_[p], b = nodes_[p + 1], h = b - a;
    double left = 0.0, right = 0.0;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      const double r = 0.5 * (a + b) + 0.5 * h * g.nodes[k];
      const double w = 0.5 * h * g.weights[k] * std::pow(r, dim_ - 1);
      right += w * (r - a) / h;
      left += w * (b - r) / h;
    }
    weights_[p] += S * left;
    weights_[p + 1] += S * right;
  }
}

RadialProfile::RadialProfile(std::shared_ptr<const RadialGrid> grid,
                             std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_->node_count())
    throw UsageError("RadialProfile: value count does not match the grid");
}

RadialProfile::RadialProfile(std::shared_ptr<const RadialGrid> grid, double constant)
    : grid_(std::move(grid)), values_(grid_->node_count(), constant) {}

RadialProfile::RadialProfile(std::shared_ptr<const RadialGrid> grid,
                             const std::function<double(double)>& f)
    : grid_(std::move(grid)) {
  values_.resize(grid_->node_count());
  for (int i = 0; i < grid_->node_count(); ++i) values_[i] = f(grid_->node(i));
}

double RadialProfile::at(double r) const {
  const auto& x = grid_->nodes();
  if (r <= x.front()) return values_.front();
  if (r >= x.back()) return values_.back();
  const auto it = std::upper_bound(x.begin(), x.end(), r);
  const int p = static_cast<int>(it - x.begin()) - 1;
  const double lam = (r - x[p]) / (x[p + 1] - x[p]);
  return (1.0 - lam) * values_[p] + lam * values_[p + 1];
}

double RadialProfile::ball_integral() const {
  const auto& w = grid_->ball_weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) acc += w[i] * values_[i];
  return acc;
}

double RadialProfile::ball_integral_of(
    const std::function<double(double, double)>& f) const {
  const auto& x = grid_->nodes();
  const double S = sphere_area(grid_->dim());
  const GaussRule& g = gauss_rule(8);
  double acc = 0.0;
  for (int p = 0; p < grid_->intervals(); ++p) {
    const double a = x[p], b = x[p + 1];
    acc += gauss_panel(g, a, b, [&](double r) {
      const double lam = (r - a) / (b - a);
      const double u = (1.0 - lam) * values_[p] + lam * values_[p + 1];
      return f(u, r) * std::pow(r, grid_->dim() - 1);
    });
  }
  return S * acc;
}

double RadialProfile::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}
double RadialProfile::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}
double RadialProfile::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

RadialProfile& RadialProfile::operator+=(const RadialProfile& o) {
  require_same_grid(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}
RadialProfile& RadialProfile::operator-=(const RadialProfile& o) {
  require_same_grid(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}
RadialProfile& RadialProfile::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

RadialProfile RadialProfile::shifted(double c) const {
  std::vector<double> v(values_);
  for (double& t : v) t -= c;
  return RadialProfile(grid_, std::move(v));
}

void RadialProfile::require_same_grid(const RadialProfile& o) const {
  if (grid_.get() != o.grid_.get() && !grid_->same_as(o.grid()))
    throw UsageError("RadialProfile: profiles live on different grids");
}

double sup_distance(const RadialProfile& a, const RadialProfile& b) {
  a.require_same_grid(b);
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace regfrac
