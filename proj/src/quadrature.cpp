#include "regfrac/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace regfrac {

namespace {

GaussRule compute_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_rule: order must be >= 1");
  GaussRule g;
  g.nodes.resize(n);
  g.weights.resize(n);
  const double pi = 3.141592653589793238462643383279502884;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre P_n(x) and derivative by recurrence
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    g.nodes[i] = -x;
    g.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    g.weights[i] = w;
    g.weights[n - 1 - i] = w;
  }
  return g;
}

std::map<int, GaussRule> g_rules;
std::mutex g_rules_mutex;

}  // namespace

const GaussRule& gauss_rule(int n) {
  std::lock_guard<std::mutex> lock(g_rules_mutex);
  auto it = g_rules.find(n);
  if (it == g_rules.end()) it = g_rules.emplace(n, compute_rule(n)).first;
  return it->second;
}

}  // namespace regfrac
