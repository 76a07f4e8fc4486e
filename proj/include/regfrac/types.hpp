#pragma once

#include <stdexcept>
#include <string>

namespace regfrac {

// Invalid mathematical input (s, radii, signs of data, ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Invalid discretization / run configuration (M, beta, quadrature, flags).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// API misuse (mismatched grids, non-monotone input sequences, ...).
struct UsageError : std::logic_error {
  using std::logic_error::logic_error;
};

// A stated precondition of an operation does not hold for the given data.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Fractional order s in (0,1) together with the space dimension N >= 2.
// Solver entry points additionally restrict s <= 1/2 unless the caller sets
// an explicit override; construction only enforces the (0,1) x {N>=2} box.
class FracOrder {
 public:
  FracOrder(double s, int dim) : s_(s), dim_(dim) {
    if (!(s > 0.0) || !(s < 1.0))
      throw DomainError("FracOrder: s must lie in (0,1), got " + std::to_string(s));
    if (dim < 2) throw DomainError("FracOrder: dim must be >= 2, got " + std::to_string(dim));
  }

  double s() const { return s_; }
  int dim() const { return dim_; }

  // The solver regime; callers pass allow_large_s to lift it.
  void require_solver_range(bool allow_large_s) const {
    if (s_ > 0.5 && !allow_large_s)
      throw ConfigError("s = " + std::to_string(s_) +
                        " is outside the supported range (0, 1/2]; "
                        "set allow_large_s to override");
  }

  bool operator==(const FracOrder& o) const { return s_ == o.s_ && dim_ == o.dim_; }

 private:
  double s_;
  int dim_;
};

}  // namespace regfrac
