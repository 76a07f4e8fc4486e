#pragma once

namespace regfrac {

// Gamma function, Lanczos approximation (g = 7, 9 coefficients) with the
// reflection formula for arguments below 1/2. Relative accuracy ~1e-13 on
// the range used here.
double gamma_fn(double x);
double log_gamma(double x);

// Surface measure of the unit sphere S^{N-1} in R^N.
double sphere_area(int dim);

// Volume of the unit ball in R^N.
double ball_volume(int dim);

}  // namespace regfrac
