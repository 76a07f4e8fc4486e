#include "regfrac/assembly.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include "regfrac/quadrature.hpp"
#include "regfrac/special.hpp"

namespace regfrac {

namespace {

std::uint64_t hash_mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}
std::uint64_t hash_double(double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, sizeof(bits));
  return bits;
}

// geometric level boundaries on (lo, hi], ratio in (0,1), ascending
std::vector<double> singular_levels(double lo, double hi, double ratio, int* count) {
  std::vector<double> b{hi};
  while (b.back() * ratio > lo) b.push_back(b.back() * ratio);
  b.push_back(lo);
  std::reverse(b.begin(), b.end());
  if (count) *count = std::max<int>(*count, static_cast<int>(b.size()) - 1);
  return b;
}

}  // namespace

void AssemblyQuadrature::validate() const {
  if (panel_nodes < 4) throw ConfigError("assembly quadrature needs at least 4 nodes per panel");
  if (!(delta_min > 0.0) || delta_min >= 1e-2)
    throw ConfigError("delta_min must lie in (0, 1e-2)");
  if (!(level_ratio > 0.0) || !(level_ratio < 1.0))
    throw ConfigError("level_ratio must lie in (0,1)");
  if (!(far_rel_width > 0.0) || far_rel_width > 1.0)
    throw ConfigError("far_rel_width must lie in (0,1]");
  angular.validate();
}

std::uint64_t AssemblyQuadrature::hash() const {
  std::uint64_t h = angular.hash();
  h = hash_mix(h, static_cast<std::uint64_t>(panel_nodes));
  h = hash_mix(h, hash_double(delta_min));
  h = hash_mix(h, hash_double(level_ratio));
  h = hash_mix(h, hash_double(far_rel_width));
  return h;
}

namespace {

// One collocation row, written into row (length M+1).
void assemble_row(int i, const RadialGrid& grid, const KernelEvaluator& ke,
                  const AssemblyQuadrature& quad, double* row, int* levels_seen,
                  long long* kernel_evals) {
  const auto& r = grid.nodes();
  const int M = grid.intervals();
  const int n = grid.dim();
  const double ri = r[i];
  const double c = ke.normalization();
  const GaussRule& g = gauss_rule(quad.panel_nodes);

  auto kernel_weight = [&](double rho) {
    ++*kernel_evals;
    return c * std::pow(rho, n - 1) * ke.angular(ri, rho);
  };

  // hat-interpolant contribution of a quadrature node: coefficient of u_i is
  // accumulated so that each node's row contribution sums to zero exactly
  auto add_hat = [&](double rho, double wgt) {
    int p = static_cast<int>(std::upper_bound(r.begin(), r.end(), rho) - r.begin()) - 1;
    p = std::min(std::max(p, 0), M - 1);
    const double lam_r = (rho - r[p]) / (r[p + 1] - r[p]);
    const double lam_l = 1.0 - lam_r;
    if (p == i) {
      const double t = wgt * lam_r;
      row[i] += t;
      row[p + 1] -= t;
    } else if (p + 1 == i) {
      const double t = wgt * lam_l;
      row[i] += t;
      row[p] -= t;
    } else {
      row[i] += wgt;
      row[p] -= wgt * lam_l;
      row[p + 1] -= wgt * lam_r;
    }
  };

  // far panels: subpanels graded toward r_i, Gauss per subpanel
  auto far_panel = [&](double a, double b, bool sing_left) {
    if (sing_left) {
      double lo = a;
      while (true) {
        const double dist = lo - ri;
        const double wdt = std::min(quad.far_rel_width * dist, b - lo);
        const double hi = (wdt >= (b - lo) * 0.999) ? b : lo + wdt;
        for (std::size_t k = 0; k < g.nodes.size(); ++k) {
          const double rho = 0.5 * (lo + hi) + 0.5 * (hi - lo) * g.nodes[k];
          add_hat(rho, 0.5 * (hi - lo) * g.weights[k] * kernel_weight(rho));
        }
        if (hi >= b) break;
        lo = hi;
      }
    } else {
      double hi = b;
      while (true) {
        const double dist = ri - hi;
        const double wdt = std::min(quad.far_rel_width * dist, hi - a);
        const double lo = (wdt >= (hi - a) * 0.999) ? a : hi - wdt;
        for (std::size_t k = 0; k < g.nodes.size(); ++k) {
          const double rho = 0.5 * (lo + hi) + 0.5 * (hi - lo) * g.nodes[k];
          add_hat(rho, 0.5 * (hi - lo) * g.weights[k] * kernel_weight(rho));
        }
        if (lo <= a) break;
        hi = lo;
      }
    }
  };

  for (int p = 0; p < M; ++p) {
    if (p == i || p + 1 == i) continue;  // adjacent panels handled below
    if (p > i)
      far_panel(r[p], r[p + 1], /*sing_left=*/true);
    else
      far_panel(r[p], r[p + 1], /*sing_left=*/false);
  }

  const double hm = (i > 0) ? ri - r[i - 1] : 0.0;
  const double hp = (i < M) ? r[i + 1] - ri : 0.0;

  if (i > 0 && i < M) {
    // local quadratic model through (i-1, i, i+1):
    //   u_i - p(r_i + t) = -du * t - d2u * t^2 / 2
    const double sum = hm + hp;
    const double du_c[3] = {-hp / (hm * sum), (hp - hm) / (hm * hp), hm / (hp * sum)};
    const double d2_c[3] = {2.0 / (hm * sum), -2.0 / (hm * hp), 2.0 / (hp * sum)};
    auto add_model = [&](double t, double wgt) {
      for (int k = 0; k < 3; ++k)
        row[i - 1 + k] += wgt * (-du_c[k] * t - 0.5 * d2_c[k] * t * t);
    };
    const double dpair = std::min(hm, hp);
    const auto b = singular_levels(quad.delta_min, dpair, quad.level_ratio, levels_seen);
    for (std::size_t lv = 0; lv + 1 < b.size(); ++lv) {
      for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        const double d = 0.5 * (b[lv] + b[lv + 1]) + 0.5 * (b[lv + 1] - b[lv]) * g.nodes[k];
        const double wq = 0.5 * (b[lv + 1] - b[lv]) * g.weights[k];
        add_model(-d, wq * kernel_weight(ri - d));
        add_model(+d, wq * kernel_weight(ri + d));
      }
    }
    // leftover of the wider panel: true hat interpolant, one-sided
    const double wide = std::max(hm, hp);
    if (wide > dpair * (1.0 + 1e-14)) {
      const double sgn = (hp > hm) ? 1.0 : -1.0;
      double lo = dpair;
      while (lo < wide * (1.0 - 1e-14)) {
        const double hi = std::min(2.0 * lo, wide);
        for (std::size_t k = 0; k < g.nodes.size(); ++k) {
          const double d = 0.5 * (lo + hi) + 0.5 * (hi - lo) * g.nodes[k];
          const double rho = ri + sgn * d;
          add_hat(rho, 0.5 * (hi - lo) * g.weights[k] * kernel_weight(rho));
        }
        lo = hi;
      }
    }
  } else if (i == 0) {
    // center row: even model u_0 - p(rho) = (u_0 - u_1) (rho/r_1)^2
    const double r1 = r[1];
    const auto b = singular_levels(quad.delta_min, r1, quad.level_ratio, levels_seen);
    for (std::size_t lv = 0; lv + 1 < b.size(); ++lv) {
      for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        const double rho = 0.5 * (b[lv] + b[lv + 1]) + 0.5 * (b[lv + 1] - b[lv]) * g.nodes[k];
        const double wq = 0.5 * (b[lv + 1] - b[lv]) * g.weights[k];
        const double lam = (rho / r1) * (rho / r1);
        const double t = wq * kernel_weight(rho) * lam;
        row[0] += t;
        row[1] -= t;
      }
    }
  } else {
    // boundary row i = M: hat model, one-sided (accuracy uncertified at r=1)
    const auto b = singular_levels(quad.delta_min, hm, quad.level_ratio, levels_seen);
    for (std::size_t lv = 0; lv + 1 < b.size(); ++lv) {
      for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        const double d = 0.5 * (b[lv] + b[lv + 1]) + 0.5 * (b[lv + 1] - b[lv]) * g.nodes[k];
        const double rho = ri - d;
        add_hat(rho, 0.5 * (b[lv + 1] - b[lv]) * g.weights[k] * kernel_weight(rho));
      }
    }
  }
}

}  // namespace

OperatorMatrix assemble_operator(std::shared_ptr<const RadialGrid> grid,
                                 const FracOrder& order, const AssemblyQuadrature& quad) {
  if (grid->dim() != order.dim())
    throw UsageError("assemble_operator: grid and order disagree on the dimension");
  quad.validate();
  KernelEvaluator ke(order, quad.angular);

  const int M = grid->intervals();
  const int nn = M + 1;

  std::atomic<int> next_row{0};
  std::vector<int> levels(nn, 0);
  std::vector<long long> evals(nn, 0);
  std::vector<std::vector<double>> rows(nn, std::vector<double>(nn, 0.0));
  auto worker = [&]() {
    for (;;) {
      const int i = next_row.fetch_add(1);
      if (i >= nn) return;
      assemble_row(i, *grid, ke, quad, rows[i].data(), &levels[i], &evals[i]);
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_threads = std::min<unsigned>(hw, static_cast<unsigned>(nn));
  if (n_threads > 1) {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  } else {
    worker();
  }

  OperatorMatrix out;
  out.grid_ = grid;
  out.order_ = order;
  out.quad_ = quad;
  out.meta_.panel_nodes = quad.panel_nodes;
  for (int i = 0; i < nn; ++i) {
    out.meta_.max_singular_levels = std::max(out.meta_.max_singular_levels, levels[i]);
    out.meta_.kernel_evaluations += evals[i];
  }

  const auto& wv = grid->ball_weights();
  out.weights_ = Eigen::Map<const Eigen::VectorXd>(wv.data(), nn);

  // B = Sym(D_w A); diagonal = negated off-diagonal row sum (exact zero rows)
  Eigen::MatrixXd& B = out.sym_;
  B.resize(nn, nn);
  for (int i = 0; i < nn; ++i)
    for (int j = i + 1; j < nn; ++j) {
      const double b = 0.5 * (wv[i] * rows[i][j] + wv[j] * rows[j][i]);
      B(i, j) = b;
      B(j, i) = b;
    }
  for (int i = 0; i < nn; ++i) {
    double acc = 0.0;
    for (int j = 0; j < nn; ++j)
      if (j != i) acc += B(i, j);
    B(i, i) = -acc;
  }
  return out;
}

double OperatorMatrix::row_sum(int i) const {
  double acc = 0.0;
  for (int j = 0; j < size(); ++j) acc += sym_(i, j);
  return acc / weights_[i];
}

RadialProfile OperatorMatrix::apply(const RadialProfile& u) const {
  if (!u.grid().same_as(*grid_))
    throw UsageError("apply: profile lives on a different grid");
  Eigen::Map<const Eigen::VectorXd> uv(u.values().data(), size());
  Eigen::VectorXd out = sym_ * uv;
  out.array() /= weights_.array();
  return RadialProfile(grid_, std::vector<double>(out.data(), out.data() + size()));
}

double OperatorMatrix::seminorm_sq(const RadialProfile& u) const {
  if (!u.grid().same_as(*grid_))
    throw UsageError("seminorm_sq: profile lives on a different grid");
  Eigen::Map<const Eigen::VectorXd> uv(u.values().data(), size());
  return uv.dot(sym_ * uv);
}

std::uint64_t OperatorMatrix::key_hash() const {
  std::uint64_t h = quad_.hash();
  h = hash_mix(h, hash_double(order_.s()));
  h = hash_mix(h, static_cast<std::uint64_t>(order_.dim()));
  h = hash_mix(h, static_cast<std::uint64_t>(grid_->intervals()));
  h = hash_mix(h, hash_double(grid_->beta()));
  return h;
}

double dyda_constant(const FracOrder& order) {
  const double s = order.s();
  const double n2 = 0.5 * order.dim();
  return std::pow(2.0, 2.0 * s) * gamma_fn(n2 + s) * gamma_fn(1.0 + s) / gamma_fn(n2);
}

double extension_identity_residual(const OperatorMatrix& A, const KernelEvaluator& ke,
                                   const RadialProfile& u,
                                   const std::function<double(double)>& full_space,
                                   double interior_cut) {
  if (!u.grid().same_as(A.grid()))
    throw UsageError("extension_identity_residual: profile grid mismatch");
  const int M = A.grid().intervals();
  if (u[M] != 0.0)
    throw PreconditionError(
        "extension_identity_residual: profile must vanish at r = 1 "
        "(zero extension must be continuous)");
  RadialProfile Au = A.apply(u);
  const double c = ke.normalization();
  double worst = 0.0;
  for (int i = 0; i <= M; ++i) {
    const double r = A.grid().node(i);
    if (r > interior_cut) break;
    const double lhs = Au[i] + c * ke.phi(r) * u[i];
    worst = std::max(worst, std::abs(lhs - full_space(r)));
  }
  return worst;
}

double dyda_residual(const OperatorMatrix& A, const KernelEvaluator& ke,
                     double interior_cut) {
  const double s = A.order().s();
  RadialProfile u(A.grid_ptr(), [s](double r) {
    const double t = 1.0 - r * r;
    return t > 0.0 ? std::pow(t, s) : 0.0;
  });
  const double B = dyda_constant(A.order());
  return extension_identity_residual(A, ke, u, [B](double) { return B; }, interior_cut);
}

void save_matrix_cache(const std::string& path, const OperatorMatrix& m) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("save_matrix_cache: cannot open " + path);
  char header[256];
  std::snprintf(header, sizeof(header),
                "regfrac-operator-cache v1 dim=%d s=%.17g M=%d beta=%.17g quad=%016llx\n",
                m.order().dim(), m.order().s(), m.grid().intervals(), m.grid().beta(),
                static_cast<unsigned long long>(m.quadrature().hash()));
  f << header;
  const int nn = m.size();
  // nodal table entries, row-major little-endian doubles
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j) {
      const double v = m.entry(i, j);
      f.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  for (int i = 0; i < nn; ++i) {
    const double v = m.weights()[i];
    f.write(reinterpret_cast<const char*>(&v), sizeof(v));
  }
  if (!f) throw UsageError("save_matrix_cache: write failed for " + path);
}

OperatorMatrix load_matrix_cache(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("load_matrix_cache: cannot open " + path);
  std::string header;
  std::getline(f, header);
  int dim = 0, M = 0;
  double s = 0.0, beta = 0.0;
  unsigned long long qh = 0;
  if (std::sscanf(header.c_str(), "regfrac-operator-cache v1 dim=%d s=%lg M=%d beta=%lg quad=%llx",
                  &dim, &s, &M, &beta, &qh) != 5)
    throw UsageError("load_matrix_cache: unrecognized header in " + path);
  OperatorMatrix out;
  out.grid_ = std::make_shared<RadialGrid>(M, beta, dim);
  out.order_ = FracOrder(s, dim);
  const int nn = M + 1;
  Eigen::MatrixXd table(nn, nn);
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j) {
      double v;
      f.read(reinterpret_cast<char*>(&v), sizeof(v));
      table(i, j) = v;
    }
  Eigen::VectorXd w(nn);
  for (int i = 0; i < nn; ++i) f.read(reinterpret_cast<char*>(&w[i]), sizeof(double));
  if (!f) throw UsageError("load_matrix_cache: truncated file " + path);
  out.weights_ = w;
  out.sym_ = w.asDiagonal() * table;
  out.sym_ = 0.5 * (out.sym_ + out.sym_.transpose()).eval();
  for (int i = 0; i < nn; ++i) {
    double acc = 0.0;
    for (int j = 0; j < nn; ++j)
      if (j != i) acc += out.sym_(i, j);
    out.sym_(i, i) = -acc;
  }
  return out;
}

}  // namespace regfrac
