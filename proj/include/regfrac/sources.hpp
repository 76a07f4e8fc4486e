#pragma once

#include <memory>
#include <string>

#include "regfrac/grid.hpp"

namespace regfrac {

// Small fixed vocabulary of radial sources:
//   "constant:c"          f(r) = c
//   "two-minus-r-squared" f(r) = 2 - r^2
//   "gaussian:a,b"        f(r) = a exp(-b r^2)
//   "csv:path"            nodal profile read from a CSV with header r,u
// No expression parser by design.
RadialProfile make_source(const std::string& descriptor,
                          std::shared_ptr<const RadialGrid> grid);

// True if the descriptor names a constant.
bool source_is_constant(const std::string& descriptor);

}  // namespace regfrac
