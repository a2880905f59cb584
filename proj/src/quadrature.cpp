#include "lunepv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lunepv::quadrature {

namespace {

// Gauss-Kronrod 7/15 pair on [-1, 1].  xgk holds the nonnegative Kronrod
// abscissae in descending order; the odd indices are the embedded Gauss-7
// nodes with weights wg.
constexpr double xgk[8] = {
    0.99145537112081263920685469752633,
    0.94910791234275852452618968404785,
    0.86486442335976907278971278864093,
    0.74153118559939443986386477328079,
    0.58608723546769113029414483825873,
    0.40584515137739716690660641207696,
    0.20778495500789846760068940377324,
    0.0};
constexpr double wgk[8] = {
    0.02293532201052922496373200805897,
    0.06309209262997855329070066318920,
    0.10479001032225018383987632254152,
    0.14065325971552591874518959051024,
    0.16900472663926790282658342659855,
    0.19035057806478540991325640242101,
    0.20443294007529889241416199923465,
    0.20948214108472782801299917489171};
constexpr double wg[4] = {
    0.12948496616886969327061143267908,
    0.27970539148927666790146777142378,
    0.38183005050511894495036977548898,
    0.41795918367346938775510204081633};

struct Panel {
  double lo = 0.0, hi = 0.0;
  double value = 0.0;
  double rule_err = 0.0;   // |K15 - G7|, refinable by splitting
  double noise_err = 0.0;  // integrated sample uncertainty, not refinable
  bool ok = true;
  int depth = 0;
};

struct PanelSpec {
  double lo = 0.0, hi = 0.0;
  int depth = 0;
};

[[noreturn]] void throw_nonfinite(double x) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "integrand returned a non-finite value at x = %.17g", x);
  throw std::domain_error(buf);
}

double node_abscissa(const PanelSpec& p, int i) {
  const double c = 0.5 * (p.lo + p.hi);
  const double h = 0.5 * (p.hi - p.lo);
  if (i < 7) return c - h * xgk[i];
  if (i < 14) return c + h * xgk[i - 7];
  return c;
}

Panel assemble_panel(const PanelSpec& spec, const Sample* s) {
  const double h = 0.5 * (spec.hi - spec.lo);
  double sk = wgk[7] * s[14].value;
  double sg = wg[3] * s[14].value;
  double sabs = wgk[7] * std::abs(s[14].value);
  double snoise = wgk[7] * std::abs(s[14].err);
  bool ok = s[14].ok;
  for (int i = 0; i < 7; ++i) {
    const double pair = s[i].value + s[i + 7].value;
    sk += wgk[i] * pair;
    sabs += wgk[i] * (std::abs(s[i].value) + std::abs(s[i + 7].value));
    snoise += wgk[i] * (std::abs(s[i].err) + std::abs(s[i + 7].err));
    if (i % 2 == 1) sg += wg[i / 2] * pair;  // Gauss nodes are xgk[1], xgk[3], xgk[5]
    ok = ok && s[i].ok && s[i + 7].ok;
  }

  Panel p;
  p.lo = spec.lo;
  p.hi = spec.hi;
  p.depth = spec.depth;
  p.value = sk * h;
  // |K-G| with a roundoff floor so refinement never chases noise.
  p.rule_err = std::max(std::abs((sk - sg) * h),
                        std::numeric_limits<double>::epsilon() * sabs * h);
  p.noise_err = snoise * h;
  p.ok = ok;
  return p;
}

// Evaluates all pending panels, node-parallel when requested.  Samples are
// stored by (panel, node) slot and assembled serially, so the outcome does
// not depend on the worker count.
std::vector<Panel> eval_panels(const std::function<Sample(double)>& f,
                               const std::vector<PanelSpec>& specs, Exec exec) {
  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(specs.size()) * 15;
  std::vector<Sample> samples(static_cast<std::size_t>(total));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4) if (exec == Exec::Parallel)
#endif
  for (std::ptrdiff_t t = 0; t < total; ++t) {
    const std::size_t p = static_cast<std::size_t>(t) / 15;
    const int i = static_cast<int>(t % 15);
    samples[static_cast<std::size_t>(t)] = f(node_abscissa(specs[p], i));
  }
  (void)exec;

  std::vector<Panel> out(specs.size());
  for (std::size_t p = 0; p < specs.size(); ++p) {
    const Sample* s = &samples[p * 15];
    for (int i = 0; i < 15; ++i)
      if (!std::isfinite(s[i].value)) throw_nonfinite(node_abscissa(specs[p], i));
    out[p] = assemble_panel(specs[p], s);
  }
  return out;
}

QuadResult run_adaptive(const std::function<Sample(double)>& f, Interval iv,
                        const QuadConfig& cfg, Exec exec) {
  if (!(std::isfinite(iv.lo) && std::isfinite(iv.hi)) || !(iv.lo < iv.hi))
    throw std::domain_error("integration interval must be finite with lo < hi");
  if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0) || !(cfg.min_interval > 0.0) ||
      cfg.max_depth < 0)
    throw std::domain_error("invalid quadrature config");

  std::vector<Panel> panels = eval_panels(f, {{iv.lo, iv.hi, 0}}, exec);
  std::uint64_t panel_evals = 1;
  bool converged = false;
  constexpr std::size_t kMaxPanels = 200000;

  for (;;) {
    double total = 0.0, rule = 0.0, noise = 0.0, rule_max = 0.0;
    for (const Panel& p : panels) {
      total += p.value;
      rule += p.rule_err;
      noise += p.noise_err;
      rule_max = std::max(rule_max, p.rule_err);
    }
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    // Leave room for the non-refinable noise, and do not chase the rule
    // error far below it: once noise dominates, more splitting cannot help.
    const double goal = std::max({tol - noise, 0.1 * noise, 0.05 * tol});
    if (rule <= goal) {
      converged = true;
      break;
    }

    // Split every panel close to the current worst, if still splittable.
    std::vector<std::size_t> split;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const Panel& p = panels[i];
      if (p.rule_err >= 0.25 * rule_max && p.depth < cfg.max_depth &&
          (p.hi - p.lo) >= 2.0 * cfg.min_interval)
        split.push_back(i);
    }
    if (split.empty() || panels.size() + split.size() > kMaxPanels) break;

    std::vector<PanelSpec> child_specs;
    child_specs.reserve(2 * split.size());
    for (std::size_t idx : split) {
      const Panel& p = panels[idx];
      const double mid = 0.5 * (p.lo + p.hi);
      child_specs.push_back({p.lo, mid, p.depth + 1});
      child_specs.push_back({mid, p.hi, p.depth + 1});
    }
    std::vector<Panel> children = eval_panels(f, child_specs, exec);
    panel_evals += child_specs.size();

    std::vector<Panel> next;
    next.reserve(panels.size() + split.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (j < split.size() && split[j] == i) {
        ++j;
        continue;
      }
      next.push_back(panels[i]);
    }
    next.insert(next.end(), children.begin(), children.end());
    panels.swap(next);
  }

  // Fixed reduction order regardless of how panels were produced.
  std::sort(panels.begin(), panels.end(),
            [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  QuadResult res;
  bool all_ok = true;
  double rule = 0.0, noise = 0.0;
  for (const Panel& p : panels) {
    res.value += p.value;
    rule += p.rule_err;
    noise += p.noise_err;
    all_ok = all_ok && p.ok;
  }
  res.abs_err = rule + noise;
  res.evals = panel_evals * 15;
  const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(res.value));
  res.converged = converged && all_ok && res.abs_err <= tol;
  return res;
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, Interval iv,
                              const QuadConfig& cfg) {
  return run_adaptive([&f](double x) { return Sample{f(x), 0.0, true}; }, iv, cfg,
                      Exec::Serial);
}

QuadResult integrate_noisy(const std::function<Sample(double)>& f, Interval iv,
                           const QuadConfig& cfg, Exec exec) {
  return run_adaptive(f, iv, cfg, exec);
}

QuadResult pv_cauchy(const std::function<double(double)>& f, Interval iv, double pole,
                     const QuadConfig& cfg) {
  if (!(std::isfinite(iv.lo) && std::isfinite(iv.hi) && std::isfinite(pole)))
    throw std::domain_error("pv_cauchy: non-finite input");
  if (!(iv.lo < pole && pole < iv.hi))
    throw std::domain_error("pv_cauchy: pole must lie strictly inside the interval");

  const double fp = f(pole);
  constexpr double kDiffStep = 1e-5;  // central-difference step for the pole limit
  const double fprime = (f(pole + kDiffStep) - f(pole - kDiffStep)) / (2.0 * kDiffStep);
  if (!std::isfinite(fp) || !std::isfinite(fprime)) throw_nonfinite(pole);

  const double guard = cfg.min_interval;
  auto subtracted = [&](double x) {
    const double d = x - pole;
    if (std::abs(d) < guard) return fprime;
    return (f(x) - fp) / d;
  };
  QuadResult res = integrate_adaptive(subtracted, iv, cfg);
  res.value += fp * std::log((iv.hi - pole) / (pole - iv.lo));
  res.evals += 3;
  return res;
}

double kernel_y_integral(double x, double y, double xp, Interval yiv) {
  if (!(std::isfinite(x) && std::isfinite(y) && std::isfinite(xp) &&
        std::isfinite(yiv.lo) && std::isfinite(yiv.hi)))
    throw std::domain_error("kernel_y_integral: non-finite input");
  if (yiv.lo == yiv.hi) return 0.0;
  if (x == xp)
    throw std::domain_error(
        "kernel_y_integral: xp == x (jump abscissa); split the x' integral");
  const double d = x - xp;
  return std::atan((y + yiv.hi) / d) - std::atan((y + yiv.lo) / d);
}

}  // namespace lunepv::quadrature
