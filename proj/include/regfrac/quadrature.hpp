#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace regfrac {

// Gauss-Legendre rule on [-1,1]; nodes/weights computed once per order and
// cached (Newton iteration on the Legendre recurrence).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussRule& gauss_rule(int n);

// Maps a cached rule onto [a,b] and accumulates f over it.
template <typename F>
double gauss_panel(const GaussRule& g, double a, double b, F&& f) {
  const double mid = 0.5 * (a + b);
  const double hal = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t k = 0; k < g.nodes.size(); ++k)
    acc += g.weights[k] * f(mid + hal * g.nodes[k]);
  return hal * acc;
}

}  // namespace regfrac
