#pragma once

#include "lunepv/quadrature.hpp"

namespace lunepv::inner {

using quadrature::QuadConfig;
using quadrature::QuadResult;

// Side-by-side comparison of the numeric inner integral against the disputed
// closed form, at both signs of the disk center.
struct InnerComparison {
  double i_num_plus = 0.0;   // numeric I, disk centered at (+a, 0)
  double i_num_minus = 0.0;  // numeric I, disk centered at (-a, 0)
  double i_jordan = 0.0;     // closed form evaluated at a
  double disc_plus = 0.0;    // i_num_plus  - i_jordan
  double disc_minus = 0.0;   // i_num_minus - i_jordan
  double err_bound = 0.0;    // summed quadrature error estimates
};

// I(x, y; center): PV over x' of (1/x') times the chord integral in y' of
// (x-x') / ((x-x')^2 + (y+y')^2), taken over the full unit disk centered at
// (center, 0).  The x' axis is split at the PV pole x'=0 (when inside) and at
// the kernel jump x'=x (when inside).  x == 0 with -y covered by the chord at
// x'=0 puts the jump on the pole and is rejected as a domain error.
QuadResult inner_numeric(double x, double y, double center, const QuadConfig& cfg);

// The closed form (pi/2) * log((2x)^4 * |(x+iy)^2 + 1 - a^2|^2), evaluated in
// real arithmetic.  Even in a and in y by construction.  x == 0 or a vanishing
// product (logarithmic singularity) is a domain error.
double i_jordan(double x, double y, double a);

// Runs inner_numeric at centers +a and -a and the closed form at a, 0 < a < 1.
InnerComparison compare_inner(double x, double y, double a, const QuadConfig& cfg);

// Sign-weighted inner pair J(x,y) = I(x,y;+a) - I(x,y;-a), evaluated as the
// difference of the two disk integrals (the lens cancels pointwise).
QuadResult j_weighted(double x, double y, double a, const QuadConfig& cfg);

// Same J(x,y) evaluated directly over the signed moon cross-sections, with
// the near-cancelling chord pair combined analytically.  Independent of the
// disk-difference path; well conditioned for |x| -> 0 where J itself vanishes.
QuadResult j_moon_slab(double x, double y, double a, const QuadConfig& cfg);

}  // namespace lunepv::inner
