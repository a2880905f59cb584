// Acceptance suite: one criterion per section, each printing a single
// PASS/FAIL line (plus supporting measurements).  Run all criteria with no
// arguments or a single one by number: `acceptance 4`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lunepv/full_integral.hpp"
#include "lunepv/geometry.hpp"
#include "lunepv/inner_integral.hpp"
#include "lunepv/mc_oracle.hpp"
#include "lunepv/quadrature.hpp"
#include "lunepv/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace lunepv;
using quadrature::Interval;
using quadrature::QuadConfig;
using quadrature::QuadResult;
using Clock = std::chrono::steady_clock;

namespace {

double secs(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failures = 0;

void verdict(int criterion, bool pass, const std::string& what) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

// Validation points inside the right moon for a given a, plus the anchor and
// an exterior probe; all with |x| > 0.1 and a nonvanishing closed-form
// product.
std::vector<geometry::Point> sample_points(double a) {
  std::vector<geometry::Point> pts = {{2.0, 0.0}, {1.0 + a, 0.2}};
  const double yt = std::sqrt(1.0 - a * a);
  std::vector<geometry::Point> candidates = {
      {0.5 + 0.5 * a, 0.1},       {1.0, 0.5 * yt},      {0.9 + 0.4 * a, -0.3 * yt},
      {0.4 + 0.8 * a, 0.25 * yt}, {1.2, -0.1},          {0.8, 0.4 * yt},
      {0.6 + a * 0.5, 0.6 * yt},  {1.0 + 0.3 * a, 0.3}};
  for (const auto& p : candidates) {
    if (std::abs(p.x) <= 0.1) continue;
    if (geometry::classify_point(p, a, 0.0) == geometry::RegionClass::RightMoon)
      pts.push_back(p);
    if (pts.size() >= 7) break;
  }
  return pts;
}

// --- criterion 1: PV unit suite ------------------------------------------

void criterion1() {
  QuadConfig cfg;
  bool pass = true;
  std::string detail;

  struct Case {
    const char* name;
    std::function<double(double)> f;
    Interval iv;
    double expect;
  };
  double series = 0.0;
  {
    double fact = 1.0;
    for (int n = 1; n <= 25; ++n) {
      fact *= n;
      if (n % 2 == 1) series += 2.0 / (n * fact);
    }
  }
  std::vector<Case> cases = {
      {"log-ratio", [](double) { return 1.0; }, {-1.0, 2.0}, std::log(2.0)},
      {"linear", [](double x) { return x; }, {-1.0, 1.0}, 2.0},
      {"exp-vs-series", [](double x) { return std::exp(x); }, {-1.0, 1.0}, series}};
  for (const Case& c : cases) {
    auto t0 = Clock::now();
    QuadResult r = quadrature::pv_cauchy(c.f, c.iv, 0.0, cfg);
    const double dt = secs(t0);
    const double err = std::abs(r.value - c.expect);
    std::printf("  pv %-14s value %.12f  |err| %.2e  %.3fs\n", c.name, r.value, err, dt);
    if (!(err <= 1e-9 && dt < 1.0 && r.converged)) pass = false;
  }
  verdict(1, pass, "pv_cauchy reference suite to 1e-9, under 1 s each");
}

// --- criterion 2: kernel reduction ----------------------------------------

void criterion2() {
  auto t0 = Clock::now();
  QuadConfig tight;
  tight.abs_tol = 1e-12;
  tight.rel_tol = 1e-12;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double x = -2.0 + 4.0 * rng::uniform01(137, k, 0);
    const double y = -2.0 + 4.0 * rng::uniform01(137, k, 1);
    double xp = -2.0 + 4.0 * rng::uniform01(137, k, 2);
    if (std::abs(x - xp) <= 1e-3) xp = x + 1.5e-3;
    double lo = -1.0 + 2.0 * rng::uniform01(137, k, 3);
    double hi = -1.0 + 2.0 * rng::uniform01(137, k, 4);
    if (lo > hi) std::swap(lo, hi);
    if (lo == hi) hi += 0.1;
    const double got = quadrature::kernel_y_integral(x, y, xp, {lo, hi});
    auto raw = [&](double yp) {
      const double u = x - xp;
      return u / (u * u + (y + yp) * (y + yp));
    };
    QuadResult oracle = quadrature::integrate_adaptive(raw, {lo, hi}, tight);
    worst = std::max(worst, std::abs(got - oracle.value));
  }
  const double dt = secs(t0);
  std::printf("  worst |closed form - quadrature| = %.2e over 100 cases (%.2fs)\n", worst, dt);
  verdict(2, worst < 1e-10 && dt < 5.0, "analytic chord integral matches raw quadrature to 1e-10");
}

// --- criterion 3: geometry ------------------------------------------------

void criterion3() {
  auto t0 = Clock::now();
  bool parity = true;
  int checked = 0;
  for (int k = 0; k < 10000; ++k) {
    const double x = -2.0 + 4.0 * rng::uniform01(211, k, 0);
    const double y = -1.5 + 3.0 * rng::uniform01(211, k, 1);
    const double a = -1.2 + 2.4 * rng::uniform01(211, k, 2);
    const double rp = std::hypot(x - a, y), rm = std::hypot(x + a, y);
    if (std::abs(rp - 1.0) < 1e-9 || std::abs(rm - 1.0) < 1e-9) continue;
    ++checked;
    const int d = geometry::delta({x, y}, a);
    parity = parity && geometry::delta({-x, y}, a) == -d &&
             geometry::delta({x, -y}, a) == d && geometry::delta({x, y}, -a) == -d;
  }

  const double area = geometry::moon_area(0.5);
  const double box_w = 3.0, box_h = 2.0, box_area = box_w * box_h;
  const std::uint64_t n = 10000000;
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = -1.5 + box_w * rng::uniform01(2024, i, 0);
    const double y = -1.0 + box_h * rng::uniform01(2024, i, 1);
    if (geometry::classify_point({x, y}, 0.5, 0.0) == geometry::RegionClass::RightMoon)
      ++hits;
  }
  const double p = double(hits) / double(n);
  const double est = box_area * p;
  const double sigma = box_area * std::sqrt(p * (1.0 - p) / double(n));
  const double dt = secs(t0);
  std::printf("  parity ok on %d points; moon area %.6f vs MC %.6f +- %.6f (%.1fs)\n",
              checked, area, est, sigma, dt);
  const bool pass = parity && checked > 9000 && std::abs(est - area) < 4.0 * sigma &&
                    std::abs(area - 1.913223) < 1e-6 && dt < 30.0;
  verdict(3, pass, "sign parities on 1e4 points; moon area matches a 1e7-sample count");
}

// --- criteria 4 and 5: closed form vs numeric inner integral ---------------

void criterion45(bool run4, bool run5) {
  QuadConfig cfg;
  cfg.abs_tol = 1e-10;
  cfg.rel_tol = 1e-10;
  QuadConfig tighter = cfg;
  tighter.abs_tol /= 10.0;
  tighter.rel_tol /= 10.0;

  bool pass4 = true;
  bool pass5 = true;
  bool any_nonzero_minus = false;

  const double anchor = inner::i_jordan(2.0, 0.0, 0.5);
  const double anchor_expect = 0.5 * M_PI * std::log(5776.0);
  std::printf("  anchor closed form (2,0,0.5): %.9f vs (pi/2)ln 5776 = %.9f\n", anchor,
              anchor_expect);
  if (anchor != anchor_expect) pass4 = false;

  for (double a : {0.3, 0.5, 0.8}) {
    const auto pts = sample_points(a);
    std::printf("  a = %.1f (%zu points)\n", a, pts.size());
    for (const auto& p : pts) {
      const inner::InnerComparison c = inner::compare_inner(p.x, p.y, a, cfg);
      if (run4) {
        const double bound = std::max(1e-5 * std::abs(c.i_jordan), 10.0 * c.err_bound);
        const bool ok = std::abs(c.disc_plus) <= bound;
        std::printf(
            "    (%6.3f,%7.3f): I+=%11.6f  closed=%11.6f  disc+=%11.6f  bound=%.2e %s\n",
            p.x, p.y, c.i_num_plus, c.i_jordan, c.disc_plus, bound, ok ? "" : "<-");
        pass4 = pass4 && ok;
      }
      if (run5) {
        const inner::InnerComparison ct = inner::compare_inner(p.x, p.y, a, tighter);
        const bool stable =
            std::abs(c.disc_minus - ct.disc_minus) <= 1e-3 * std::abs(ct.disc_minus);
        mc::McEstimate mp = mc::mc_estimate_inner(p.x, p.y, +a, 4000000, 404);
        mc::McEstimate mm = mc::mc_estimate_inner(p.x, p.y, -a, 4000000, 405);
        const bool mc_ok =
            std::abs(c.i_num_plus - mp.mean) <= 4.0 * mp.std_err + c.err_bound &&
            std::abs(c.i_num_minus - mm.mean) <= 4.0 * mm.std_err + c.err_bound;
        if (std::abs(ct.disc_minus) > 1e-3) any_nonzero_minus = true;
        std::printf("    (%6.3f,%7.3f): disc-=%11.6f  stable=%d  mc(+/-)=%d\n", p.x, p.y,
                    ct.disc_minus, stable, mc_ok);
        pass5 = pass5 && stable && mc_ok;
      }
    }
  }

  if (run4) {
    if (!pass4)
      std::printf(
          "  note: the numeric inner integral (cross-checked by the MC oracle and by its\n"
          "  exact 2*pi*a/x large-x tail) differs from the printed closed form at every\n"
          "  sampled point; the agreement bound is not attainable for this expression.\n");
    verdict(4, pass4, "closed form matches the numeric inner integral for a > 0");
  }
  if (run5) {
    std::printf("  measured negative-center discrepancies are %s\n",
                any_nonzero_minus ? "nonzero (sign asymmetry confirmed)"
                                  : "all ~0 (sign-asymmetry claim refuted)");
    verdict(5, pass5, "negative-center discrepancy is refinement-stable and MC-consistent");
  }
}

// --- criterion 6: full integral -------------------------------------------

void criterion6() {
  auto t0 = Clock::now();
  bool pass = true;

  full::FConfig fc;
  fc.quad.abs_tol = 1e-4;
  fc.quad.rel_tol = 1e-4;

  const full::FResult f0 = full::f_eval(0.0, fc);
  std::printf("  F(0) = %.17g (evals %llu)\n", f0.value,
              static_cast<unsigned long long>(f0.evals));
  pass = pass && f0.value == 0.0 && f0.converged && f0.evals == 0;

  full::FConfig nosym = fc;
  nosym.exploit_symmetry = false;
  const full::FResult fp = full::f_eval(0.5, nosym);
  const full::FResult fm = full::f_eval(-0.5, nosym);
  std::printf("  F(+0.5) = %.8f +- %.3e (converged %d)\n", fp.value, fp.abs_err, fp.converged);
  std::printf("  F(-0.5) = %.8f +- %.3e (converged %d)\n", fm.value, fm.abs_err, fm.converged);
  pass = pass && std::abs(fp.value - fm.value) <= fp.abs_err + fm.abs_err;

  const mc::McEstimate m = mc::mc_estimate_f(0.5, 100000000, 90210);
  const double gap = std::abs(fp.value - m.mean);
  const double band = 4.0 * (m.std_err + fp.abs_err);
  std::printf("  MC F(0.5) = %.4f +- %.4f; |gap| %.3f vs band %.3f\n", m.mean, m.std_err,
              gap, band);
  pass = pass && gap <= band;

  const auto rows = full::scan({0.5}, fc);
  std::printf("  refinement delta %.3e vs 10*abs_err %.3e\n", rows[0].refinement_delta,
              10.0 * rows[0].f.abs_err);
  pass = pass && rows[0].refinement_delta < 10.0 * rows[0].f.abs_err;

  const double dt = secs(t0);
  std::printf("  runtime %.1fs (budget 1800s)\n", dt);
  verdict(6, pass && dt < 1800.0,
          "full integral: zero at a=0, sign symmetric, MC-bracketed, refinement-stable");
}

// --- criterion 7: determinism ----------------------------------------------

void criterion7() {
  bool pass = true;
#ifdef LUNEPV_CLI_PATH
  auto run_scan = [](int jobs) {
    const std::string out = "/tmp/lunepv_acc_scan_" + std::to_string(jobs) + ".csv";
    const std::string cmd = std::string(LUNEPV_CLI_PATH) +
                            " scan --a-min 0.2 --a-max 0.6 --steps 3 --tol 1e-2 --jobs " +
                            std::to_string(jobs) + " --out " + out + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    (void)rc;  // per-row truncation flags give exit 3; the bytes are what matter here
    std::ifstream f(out, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  const std::string s1 = run_scan(1);
  const std::string s8 = run_scan(8);
  std::printf("  scan bytes: jobs=1 %zuB, jobs=8 %zuB, %s\n", s1.size(), s8.size(),
              s1 == s8 ? "identical" : "DIFFER");
  pass = pass && !s1.empty() && s1 == s8;
#endif
#ifdef _OPENMP
  omp_set_num_threads(1);
  const mc::McEstimate a = mc::mc_estimate_inner(1.5, 0.2, 0.5, 1000000, 77);
  omp_set_num_threads(8);
  const mc::McEstimate b = mc::mc_estimate_inner(1.5, 0.2, 0.5, 1000000, 77);
  std::printf("  MC bits across thread counts: %s\n",
              (a.mean == b.mean && a.std_err == b.std_err) ? "identical" : "DIFFER");
  pass = pass && a.mean == b.mean && a.std_err == b.std_err;
#endif
  const mc::McEstimate c1 = mc::mc_estimate_f(0.5, 2000000, 5);
  const mc::McEstimate c2 = mc::mc_estimate_f(0.5, 2000000, 5);
  pass = pass && c1.mean == c2.mean && c1.std_err == c2.std_err;
  verdict(7, pass, "byte-identical scans across worker counts; bitwise MC for fixed seed");
}

// --- criterion 8: the scan deliverable -------------------------------------

void criterion8() {
  auto t0 = Clock::now();
  full::FConfig fc;
  fc.quad.abs_tol = 1e-3;
  fc.quad.rel_tol = 1e-3;
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(0.1 * i);
  const auto rows = full::scan(grid, fc);
  bool pass = rows.size() == 9;
  std::printf("  a      F               abs_err      converged  refinement_delta  window\n");
  for (const auto& r : rows) {
    std::printf("  %.1f  %14.6f  %11.3e  %-9s  %11.3e  %.2e\n", r.a, r.f.value, r.f.abs_err,
                r.f.converged ? "yes" : "truncated", r.refinement_delta,
                r.f.touchpoint_window);
    pass = pass && std::isfinite(r.f.value) &&
           (r.f.converged || (r.f.abs_err > 0.0 && r.f.touchpoint_window > 0.0));
  }
  std::printf(
      "  note: the moons meet at (0, +-sqrt(1-a^2)); the windowed refinement finds a\n"
      "  non-contracting ~1/|dy| approach there, so rows carry truncation flags and\n"
      "  cutoff-dominated error bars rather than converged values.\n");
  std::printf("  runtime %.1fs\n", secs(t0));
  verdict(8, pass, "scan over a = 0.1..0.9 completes with honest per-row flags");
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  auto want = [only](int n) { return only == 0 || only == n; };

  if (want(1)) criterion1();
  if (want(2)) criterion2();
  if (want(3)) criterion3();
  if (want(4) || want(5)) criterion45(want(4), want(5));
  if (want(6)) criterion6();
  if (want(7)) criterion7();
  if (want(8)) criterion8();

  if (g_failures == 0)
    std::printf("all selected criteria passed\n");
  else
    std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
