#include "lunepv/full_integral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lunepv/geometry.hpp"
#include "lunepv/inner_integral.hpp"

namespace lunepv::full {

using quadrature::Interval;
using quadrature::QuadResult;
using quadrature::Sample;
using quadrature::integrate_noisy;

namespace {

// Moon cross-section of the disk centered at (c, 0), minus the disk at
// (-c, 0), at height y.  The near-vanishing endpoint (the one that closes on
// the touch point) is formed as a quotient instead of a difference, so slabs
// stay accurate when y approaches the touch ordinate.
bool stable_slab(double y, double c, double yt2, Interval* out) {
  const double w2 = (1.0 - y) * (1.0 + y);
  if (!(w2 > 0.0) || c == 0.0) return false;
  const double w = std::sqrt(w2);
  const double ac = std::abs(c);
  // s = y^2 - (1 - a^2); negative inside the lens band, positive outside.
  double s;
  if (yt2 > 0.0) {
    const double yt = std::sqrt(yt2);
    s = (y - yt) * (y + yt);
  } else {
    s = y * y - yt2;
  }
  const double lo = std::abs(s) / (ac + w);
  const double hi = ac + w;
  if (!(lo < hi)) return false;
  if (c > 0.0)
    *out = {lo, hi};
  else
    *out = {-hi, -lo};
  return true;
}

struct JCache {
  std::mutex mu;
  // (x, y, tol) -> memoized inner result; evals are replayed on hits so
  // totals do not depend on scheduling.
  std::map<std::tuple<double, double, double>, QuadResult> map;
};

class Evaluator {
 public:
  Evaluator(double a, const FConfig& fc) : a_(a), fc_(fc) {
    yt2_ = (1.0 - std::abs(a)) * (1.0 + std::abs(a));
    qx_ = fc.quad;
    qx_.abs_tol = fc.quad.abs_tol / 8.0;
    qx_.min_interval = 1e-13;
    qx_.max_depth = 52;
    qj_ = fc.quad;
    qj_.abs_tol = fc.quad.abs_tol / 10.0;
    qj_.rel_tol = fc.quad.rel_tol / 10.0;
    qj_.min_interval = 1e-13;  // rim sqrt endpoints need deep bisection
  }

  FResult run() {
    FResult out;
    out.a = a_;
    out.converged = true;

    std::vector<double> touches;
    if (yt2_ > 0.0) {
      const double yt = std::sqrt(yt2_);
      touches = {-yt, yt};
    } else if (yt2_ == 0.0) {
      touches = {0.0};
    }

    std::vector<double> edges{-1.0, 0.0, 1.0};
    edges.insert(edges.end(), touches.begin(), touches.end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    auto is_touch = [&touches](double e) {
      return std::find(touches.begin(), touches.end(), e) != touches.end();
    };

    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double lo = edges[i], hi = edges[i + 1];
      const double budget = fc_.quad.abs_tol * (hi - lo) / 2.0;
      integrate_panel(lo, hi, is_touch(lo), is_touch(hi), budget, &out);
    }
    out.evals = evals_.load();

    const double tol =
        std::max(fc_.quad.abs_tol, fc_.quad.rel_tol * std::abs(out.value));
    if (out.abs_err > tol) out.converged = false;
    return out;
  }

 private:
  // Outer integrand J(x, y) / x^2, with the inner tolerance scaled by x^2 so
  // the induced error density stays uniform along the slab.  The slab pieces
  // of J cancel to O(x), so a per-piece relative tolerance would leave
  // O(piece)-scaled noise behind; J runs under absolute control only.
  Sample phi(double x, double y, double jtol) {
    quadrature::QuadConfig qj = qj_;
    qj.abs_tol = std::max(1e-14, jtol * std::min(1.0, x * x));
    qj.rel_tol = 1e-14;
    QuadResult j;
    const auto key = std::make_tuple(x, y, qj.abs_tol);
    {
      std::lock_guard<std::mutex> lock(cache_.mu);
      auto it = cache_.map.find(key);
      if (it != cache_.map.end()) {
        j = it->second;
        evals_ += j.evals;
        const double inv = 1.0 / (x * x);
        return {j.value * inv, j.abs_err * inv, j.converged};
      }
    }
    j = inner::j_moon_slab(x, y, a_, qj);
    evals_ += j.evals;
    {
      std::lock_guard<std::mutex> lock(cache_.mu);
      cache_.map.emplace(key, j);
    }
    const double inv = 1.0 / (x * x);
    return {j.value * inv, j.abs_err * inv, j.converged};
  }

  // Integral of phi over one slab interval at fixed y.  Wide slabs with a
  // small positive endpoint are integrated in log coordinates, which turns
  // the ~1/x growth toward the touch point into a near-flat integrand.
  QuadResult slab_integral(Interval iv, double y, double xtol) {
    const bool mirrored = iv.hi < 0.0;
    const double lo = mirrored ? -iv.hi : iv.lo;
    const double hi = mirrored ? -iv.lo : iv.hi;
    const double sgn = mirrored ? -1.0 : 1.0;
    const double jtol = xtol / 10.0;

    quadrature::QuadConfig qx = qx_;
    qx.abs_tol = xtol;
    if (hi / lo > 50.0) {
      auto fu = [this, y, sgn, jtol](double u) {
        const double x = std::exp(u);
        Sample s = phi(sgn * x, y, jtol);
        return Sample{s.value * x, s.err * x, s.ok};
      };
      return integrate_noisy(fu, {std::log(lo), std::log(hi)}, qx, quadrature::Exec::Serial);
    }
    auto fx = [this, y, sgn, jtol](double x) { return phi(sgn * x, y, jtol); };
    return integrate_noisy(fx, {lo, hi}, qx, quadrature::Exec::Serial);
  }

  // Sign-weighted x integral at fixed y: the right moon carries +1 and the
  // left moon -1; under symmetry exploitation the mirror contribution equals
  // the right one and is folded in as a factor 2.  gtol is the absolute
  // accuracy this particular y node needs to deliver.
  Sample g(double y, double gtol) {
    const double xtol = std::max(qx_.abs_tol, std::min(gtol, 1.0));
    Sample out;
    Interval iv;
    if (stable_slab(y, a_, yt2_, &iv)) {
      const QuadResult r = slab_integral(iv, y, xtol);
      out.value += r.value;
      out.err += r.abs_err;
      out.ok = out.ok && r.converged;
    }
    if (fc_.exploit_symmetry) {
      out.value *= 2.0;
      out.err *= 2.0;
    } else if (stable_slab(y, -a_, yt2_, &iv)) {
      const QuadResult r = slab_integral(iv, y, xtol);
      out.value -= r.value;
      out.err += r.abs_err;
      out.ok = out.ok && r.converged;
    }
    return out;
  }

  void fold(FResult* out, const QuadResult& r) {
    out->value += r.value;
    out->abs_err += r.abs_err;
    out->converged = out->converged && r.converged;
  }

  // Integrates g over (lo, hi) with a per-node accuracy matched to this
  // stretch's share of the budget.
  QuadResult integrate_y(double lo, double hi, double budget) {
    const double gtol = 0.25 * budget / (hi - lo);
    auto gfn = [this, gtol](double y) { return g(y, gtol); };
    quadrature::QuadConfig qc = qx_;
    qc.abs_tol = std::max(budget, 1e-15);
    return integrate_noisy(gfn, {lo, hi}, qc, fc_.exec);
  }

  void integrate_panel(double lo, double hi, bool touch_lo, bool touch_hi,
                       double budget, FResult* out) {
    const double width = hi - lo;
    if (!touch_lo && !touch_hi) {
      fold(out, integrate_y(lo, hi, budget));
      return;
    }

    double w0 = std::min(fc_.initial_window, width / 4.0);
    const double core_lo = lo + (touch_lo ? w0 : 0.0);
    const double core_hi = hi - (touch_hi ? w0 : 0.0);
    const int sides = (touch_lo ? 1 : 0) + (touch_hi ? 1 : 0);
    const double core_budget = budget * 0.5;
    const double side_budget = budget * 0.5 / sides;

    fold(out, integrate_y(core_lo, core_hi, core_budget));

    if (touch_hi) windows_toward(hi, w0, +1, side_budget, out);
    if (touch_lo) windows_toward(lo, w0, -1, side_budget, out);
  }

  // Geometric window cascade toward the touch ordinate T.  dir = +1 means the
  // touch point is the upper end (windows approach from below).  Window j
  // covers the band at distance (w0*2^-j-1, w0*2^-j] from T.  A contracting
  // cascade follows t_j ~ (A + B j) 2^-j and the leftover tail 3 t_j - t_j-1
  // is added once it fits the budget, together with its observed model error.
  // A cascade whose octaves stop shrinking signals a non-integrable ~1/dy
  // approach to the touch point: the run stops, the value keeps the truncated
  // partial sum as a bracketing estimate, and the unexplored octaves down to
  // max_windows are charged to abs_err with converged = false.
  void windows_toward(double T, double w0, int dir, double budget, FResult* out) {
    double t0 = 0.0, t1 = 0.0, t2 = 0.0;  // last three window values
    bool done = false;

    for (int j = 0; j < fc_.max_windows; ++j) {
      const double far = w0 * std::pow(0.5, j);
      const double near = 0.5 * far;
      const double wlo = (dir > 0) ? T - far : T + near;
      const double whi = (dir > 0) ? T - near : T + far;
      if (!(wlo < whi)) break;  // window collapsed at double resolution

      const double wbudget = std::max(budget * 0.3 / ((j + 1.0) * (j + 1.0)), 1e-15);
      const QuadResult r = integrate_y(wlo, whi, wbudget);
      out->value += r.value;
      out->abs_err += r.abs_err;
      out->converged = out->converged && r.converged;
      out->touchpoint_window =
          (out->touchpoint_window == 0.0) ? near : std::min(out->touchpoint_window, near);

      t0 = t1;
      t1 = t2;
      t2 = r.value;
      if (j >= 3 && std::abs(t2) > budget) {
        // A cascade that stops shrinking (~1/dy pole) or grows (~1/dy^2 at
        // exact tangency) cannot converge; stop and report the truncation.
        const bool plateau = std::abs(t2 - t1) < 0.05 * std::abs(t2) &&
                             std::abs(t1 - t0) < 0.05 * std::abs(t1);
        const bool growing =
            std::abs(t2) >= 1.5 * std::abs(t1) && std::abs(t1) >= 1.5 * std::abs(t0);
        if (plateau || growing) {
          if (plateau) out->value += 3.0 * t2 - t1;
          const double octaves = static_cast<double>(fc_.max_windows - j);
          out->abs_err += std::abs(t2) * (growing ? std::exp2(octaves) : octaves);
          out->converged = false;
          return;
        }
      }
      if (j >= 2) {
        const double tail = 3.0 * t2 - t1;
        const double tail_prev = 3.0 * t1 - t0;
        const double model_err = std::abs(tail_prev - t2 - tail);
        const double scale = std::abs(out->value) + 1e-30;
        if (std::abs(tail) + model_err <= 0.5 * budget ||
            std::abs(tail) <= 1e-16 * scale) {
          out->value += tail;
          out->abs_err += 0.25 * std::abs(tail) + model_err;
          done = true;
          break;
        }
      }
    }
    if (!done) {
      const double tail = 3.0 * t2 - t1;
      out->value += tail;
      out->abs_err += 3.0 * std::abs(tail) +
                      std::abs(t2) * 2.0;  // cutoff dependence of a stalled cascade
      out->converged = false;
    }
  }

  double a_;
  FConfig fc_;
  double yt2_ = 0.0;
  quadrature::QuadConfig qx_;  // x-level (slab) config
  quadrature::QuadConfig qj_;  // inner J config before per-node scaling
  std::atomic<std::uint64_t> evals_{0};
  JCache cache_;
};

}  // namespace

FResult f_eval(double a, const FConfig& fc) {
  if (!std::isfinite(a)) throw std::domain_error("f_eval: non-finite a");
  if (a == 0.0) {
    FResult out;
    out.a = a;
    out.value = 0.0;
    out.abs_err = 0.0;
    out.evals = 0;
    out.converged = true;
    return out;
  }
  Evaluator ev(a, fc);
  return ev.run();
}

FResult f_eval(double a, const QuadConfig& cfg, bool exploit_symmetry) {
  FConfig fc;
  fc.quad = cfg;
  fc.exploit_symmetry = exploit_symmetry;
  return f_eval(a, fc);
}

std::vector<ScanRow> scan(const std::vector<double>& a_values, const FConfig& fc) {
  std::vector<ScanRow> rows;
  rows.reserve(a_values.size());
  for (double a : a_values) {
    ScanRow row;
    row.a = a;
    try {
      FConfig loose = fc;
      loose.quad.abs_tol *= 10.0;
      loose.quad.rel_tol *= 10.0;
      const FResult coarse = f_eval(a, loose);
      row.f = f_eval(a, fc);
      row.refinement_delta = std::abs(row.f.value - coarse.value);
    } catch (const std::exception&) {
      row.f.a = a;
      row.f.value = std::numeric_limits<double>::quiet_NaN();
      row.f.abs_err = std::numeric_limits<double>::infinity();
      row.f.converged = false;
      row.refinement_delta = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lunepv::full
