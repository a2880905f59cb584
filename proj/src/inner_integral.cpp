#include "lunepv/inner_integral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace lunepv::inner {

using quadrature::Interval;
using quadrature::integrate_adaptive;
using quadrature::pv_cauchy;

namespace {

void require_finite(double v) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite input");
}

// Chord half-height of the unit disk centered at (c, 0); 0 outside its span.
double chord_half(double xp, double c) {
  const double t = (1.0 - (xp - c)) * (1.0 + (xp - c));
  return t > 0.0 ? std::sqrt(t) : 0.0;
}

// atan(pnum/d) - atan(qnum/d) where dnum = pnum - qnum is supplied in a
// cancellation-free form.  Uses the arctan difference identity with the
// branch fixed by the sign of the rotation.
double atan_strip(double pnum, double qnum, double d, double dnum) {
  const double denom = d * d + pnum * qnum;
  const double t = dnum * d / denom;  // denom == 0 -> +-inf -> atan gives +-pi/2
  double r = std::atan(t);
  if (denom < 0.0) r += (dnum * d > 0.0) ? M_PI : -M_PI;
  return r;
}

// Accumulate a sub-integral into the running total.
void fold(QuadResult& acc, const QuadResult& r) {
  acc.value += r.value;
  acc.abs_err += r.abs_err;
  acc.evals += r.evals;
  acc.converged = acc.converged && r.converged;
}

QuadConfig share(const QuadConfig& cfg, int pieces) {
  QuadConfig c = cfg;
  c.abs_tol = cfg.abs_tol / pieces;
  return c;
}

}  // namespace

QuadResult inner_numeric(double x, double y, double center, const QuadConfig& cfg) {
  require_finite(x);
  require_finite(y);
  require_finite(center);

  const double lo = center - 1.0;
  const double hi = center + 1.0;
  const double h0sq = (1.0 - center) * (1.0 + center);  // squared chord height at x' = 0
  if (x == 0.0 && h0sq > 0.0 && y * y <= h0sq)
    throw std::domain_error(
        "inner_numeric: x = 0 places the kernel jump on the PV pole x' = 0");

  // Chord-integrated kernel as a function of x'; smooth except for the jump
  // at x' = x (when (x,y) lies inside the disk) and sqrt behavior at the rim.
  auto K = [x, y, center](double xp) {
    const double h = chord_half(xp, center);
    if (h == 0.0) return 0.0;
    const double d = x - xp;
    if (d == 0.0) return 0.0;  // midpoint of the two one-sided jump limits
    return std::atan((y + h) / d) - std::atan((y - h) / d);
  };
  auto K_over_x = [&K](double xp) { return K(xp) / xp; };

  const bool has_pole = lo < 0.0 && 0.0 < hi;
  const bool has_jump = lo < x && x < hi;

  QuadResult acc;
  acc.converged = true;
  if (has_pole) {
    if (has_jump && x > 0.0) {
      const QuadConfig c = share(cfg, 2);
      fold(acc, pv_cauchy(K, {lo, x}, 0.0, c));
      fold(acc, integrate_adaptive(K_over_x, {x, hi}, c));
    } else if (has_jump && x < 0.0) {
      const QuadConfig c = share(cfg, 2);
      fold(acc, integrate_adaptive(K_over_x, {lo, x}, c));
      fold(acc, pv_cauchy(K, {x, hi}, 0.0, c));
    } else {
      // x outside the disk span, or x == 0 with the chord clear of -y
      // (K analytic through the pole in that case).
      fold(acc, pv_cauchy(K, {lo, hi}, 0.0, cfg));
    }
  } else if (has_jump) {
    const QuadConfig c = share(cfg, 2);
    fold(acc, integrate_adaptive(K_over_x, {lo, x}, c));
    fold(acc, integrate_adaptive(K_over_x, {x, hi}, c));
  } else {
    fold(acc, integrate_adaptive(K_over_x, {lo, hi}, cfg));
  }
  return acc;
}

double i_jordan(double x, double y, double a) {
  require_finite(x);
  require_finite(y);
  require_finite(a);
  if (x == 0.0) throw std::domain_error("i_jordan: requires x != 0");

  const double re = x * x - y * y + 1.0 - a * a;
  const double im = 2.0 * x * y;
  const double q = re * re + im * im;  // |(x+iy)^2 + 1 - a^2|^2
  if (q == 0.0)
    throw std::domain_error("i_jordan: logarithmic singularity, product vanishes");
  // log((2x)^4 * q) evaluated as logs to dodge overflow at large |x|.
  const double v = 0.5 * M_PI * (4.0 * std::log(2.0 * std::abs(x)) + std::log(q));
  if (!std::isfinite(v)) throw std::domain_error("i_jordan: product overflows");
  return v;
}

InnerComparison compare_inner(double x, double y, double a, const QuadConfig& cfg) {
  if (!(a > 0.0 && a < 1.0))
    throw std::domain_error("compare_inner: requires 0 < a < 1");
  InnerComparison c;
  c.i_jordan = i_jordan(x, y, a);
  const QuadResult p = inner_numeric(x, y, +a, cfg);
  const QuadResult m = inner_numeric(x, y, -a, cfg);
  c.i_num_plus = p.value;
  c.i_num_minus = m.value;
  c.disc_plus = p.value - c.i_jordan;
  c.disc_minus = m.value - c.i_jordan;
  c.err_bound = p.abs_err + m.abs_err;
  return c;
}

QuadResult j_weighted(double x, double y, double a, const QuadConfig& cfg) {
  const QuadResult p = inner_numeric(x, y, +a, cfg);
  const QuadResult m = inner_numeric(x, y, -a, cfg);
  QuadResult r;
  r.value = p.value - m.value;
  r.abs_err = p.abs_err + m.abs_err;
  r.evals = p.evals + m.evals;
  r.converged = p.converged && m.converged;
  return r;
}

QuadResult j_moon_slab(double x, double y, double a, const QuadConfig& cfg) {
  require_finite(x);
  require_finite(y);
  require_finite(a);

  QuadResult acc;
  acc.converged = true;
  if (a == 0.0) return acc;  // coinciding circles, sign function vanishes

  const double aa = std::abs(a);

  // Sign-weighted chord integral at fixed x'.  Where both chords exist the
  // two strips nearly cancel; their difference is formed analytically with
  // hp - hm = 4 a x' / (hp + hm), so the value stays accurate as x' -> 0.
  auto Kd = [x, y, a](double xp) {
    const double hp = chord_half(xp, +a);
    const double hm = chord_half(xp, -a);
    const double d = x - xp;
    if (hp > 0.0 && hm > 0.0) {
      if (d == 0.0) return 0.0;
      const double dh = 4.0 * a * xp / (hp + hm);
      const double d1 = atan_strip(y + hp, y + hm, d, dh);
      const double d2 = atan_strip(y - hm, y - hp, d, dh);
      return d1 + d2;
    }
    if (hp > 0.0) {
      if (d == 0.0) return 0.0;
      return std::atan((y + hp) / d) - std::atan((y - hp) / d);
    }
    if (hm > 0.0) {
      if (d == 0.0) return 0.0;
      return -(std::atan((y + hm) / d) - std::atan((y - hm) / d));
    }
    return 0.0;
  };
  auto Kd_over_x = [&Kd](double xp) { return Kd(xp) / xp; };

  // Support pieces of the sign function along x', with internal breakpoints
  // where the chord structure changes and at the kernel jump x' = x.
  struct Piece {
    double lo, hi;
    bool pole;  // PV pole x' = 0 interior to this piece
  };
  std::vector<Piece> pieces;
  if (aa < 1.0) {
    // Single support (-1-|a|, 1+|a|); chord structure changes at +-(1-|a|).
    std::vector<double> cuts{-1.0 - aa, -(1.0 - aa), 1.0 - aa, 1.0 + aa};
    if (x > cuts.front() && x < cuts.back()) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      pieces.push_back({cuts[i], cuts[i + 1], cuts[i] < 0.0 && 0.0 < cuts[i + 1]});
  } else {
    for (double c : {aa, -aa}) {
      double plo = c - 1.0, phi = c + 1.0;
      std::vector<double> cuts{plo, phi};
      if (x > plo && x < phi) cuts.push_back(x);
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        pieces.push_back({cuts[i], cuts[i + 1], false});
    }
  }

  const QuadConfig c = share(cfg, static_cast<int>(pieces.size()));
  for (const Piece& p : pieces) {
    if (!(p.lo < p.hi)) continue;
    if (p.pole)
      fold(acc, pv_cauchy(Kd, {p.lo, p.hi}, 0.0, c));
    else
      fold(acc, integrate_adaptive(Kd_over_x, {p.lo, p.hi}, c));
  }
  return acc;
}

}  // namespace lunepv::inner
