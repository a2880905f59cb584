#pragma once

#include <cstdint>
#include <functional>

namespace lunepv::quadrature {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

// Result of a 1-d integration.  converged == true implies
// abs_err <= max(abs_tol, rel_tol * |value|) for the config it was run with.
struct QuadResult {
  double value = 0.0;
  double abs_err = 0.0;
  std::uint64_t evals = 0;
  bool converged = false;
};

struct QuadConfig {
  double abs_tol = 1e-9;
  double rel_tol = 1e-8;
  int max_depth = 48;          // bisection depth bound per panel
  double min_interval = 1e-8;  // smallest splittable panel; also the pole guard radius
};

// Integrand value with an attached pointwise uncertainty, for nested
// quadrature where the integrand is itself the result of an inner
// integration.  The uncertainty is integrated into abs_err alongside the
// refinable rule error; the integrator never tries to refine it away.
struct Sample {
  double value = 0.0;
  double err = 0.0;
  bool ok = true;
};

enum class Exec { Serial, Parallel };

// Adaptive Gauss-Kronrod 7/15 bisection with a per-panel embedded error
// estimate.  Throws std::domain_error if f evaluates to a non-finite value,
// naming the abscissa.  Depth/width exhaustion yields converged == false,
// never a silent wrong answer.
QuadResult integrate_adaptive(const std::function<double(double)>& f, Interval iv,
                              const QuadConfig& cfg);

// Same engine for noisy integrands.  Panel evaluation may run across threads
// when exec == Parallel; the final reduction is in a fixed order, so results
// are bitwise identical for any worker count.
QuadResult integrate_noisy(const std::function<Sample(double)>& f, Interval iv,
                           const QuadConfig& cfg, Exec exec = Exec::Serial);

// PV integral of f(x)/(x - pole) over iv, pole strictly inside, by
// singularity subtraction:
//   PV int f/(x-p) = int (f(x)-f(p))/(x-p) + f(p) * log((hi-p)/(p-lo)).
// Within min_interval of the pole the subtracted integrand is replaced by a
// central-difference estimate of f'(pole).  Pole at or outside the endpoints
// is a domain error; split the interval or use integrate_adaptive instead.
QuadResult pv_cauchy(const std::function<double(double)>& f, Interval iv, double pole,
                     const QuadConfig& cfg);

// Exact antiderivative of t -> (x-xp) / ((x-xp)^2 + (y+t)^2) over yiv:
//   atan((y+yiv.hi)/(x-xp)) - atan((y+yiv.lo)/(x-xp)).
// xp == x is a domain error; the integrand jumps there and callers must split.
double kernel_y_integral(double x, double y, double xp, Interval yiv);

}  // namespace lunepv::quadrature
