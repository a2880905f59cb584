// Compares the OpenMP-parallel evaluation paths against single-threaded runs
// of the same kernels: panel quadrature, the nested full-integral assembly,
// and block Monte Carlo.  Results must be bitwise identical; only wall time
// may differ.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "lunepv/full_integral.hpp"
#include "lunepv/mc_oracle.hpp"
#include "lunepv/quadrature.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using Clock = std::chrono::steady_clock;
using lunepv::quadrature::Exec;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

struct Timing {
  double value;
  double secs;
};

template <class Fn>
Timing timed(Fn&& fn) {
  auto t0 = Clock::now();
  const double v = fn();
  return {v, seconds_since(t0)};
}

void report(const char* name, const Timing& serial, const Timing& parallel) {
  std::printf("%-22s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n", name,
              serial.secs, parallel.secs, serial.secs / parallel.secs,
              serial.value == parallel.value ? "bitwise equal" : "MISMATCH");
}

}  // namespace

int main() {
  const int threads = max_threads();
  std::printf("worker threads available: %d\n\n", threads);

  // Expensive smooth integrand through the panel engine.
  {
    auto f = [](double xv) {
      double s = 0.0;
      for (int i = 1; i <= 400; ++i) s += std::sin(i * xv) / (i * i);
      return lunepv::quadrature::Sample{s, 0.0, true};
    };
    lunepv::quadrature::QuadConfig cfg;
    cfg.abs_tol = 1e-12;
    cfg.rel_tol = 1e-12;
    set_threads(1);
    Timing st = timed([&] {
      return lunepv::quadrature::integrate_noisy(f, {0.0, 3.0}, cfg, Exec::Parallel).value;
    });
    set_threads(threads);
    Timing pt = timed([&] {
      return lunepv::quadrature::integrate_noisy(f, {0.0, 3.0}, cfg, Exec::Parallel).value;
    });
    report("panel quadrature", st, pt);
  }

  // Full integral: nested quadrature, outer level parallel.
  {
    lunepv::full::FConfig fc;
    fc.quad.abs_tol = 1e-3;
    fc.quad.rel_tol = 1e-3;
    set_threads(1);
    Timing st = timed([&] { return lunepv::full::f_eval(0.5, fc).value; });
    set_threads(threads);
    Timing pt = timed([&] { return lunepv::full::f_eval(0.5, fc).value; });
    report("full integral a=0.5", st, pt);
  }

  // Monte Carlo block sums.
  {
    set_threads(1);
    Timing st = timed([&] { return lunepv::mc::mc_estimate_inner(2.0, 0.0, 0.5, 20000000, 7).mean; });
    set_threads(threads);
    Timing pt = timed([&] { return lunepv::mc::mc_estimate_inner(2.0, 0.0, 0.5, 20000000, 7).mean; });
    report("mc inner 2e7", st, pt);
  }
  {
    set_threads(1);
    Timing st = timed([&] { return lunepv::mc::mc_estimate_f(0.5, 20000000, 11).mean; });
    set_threads(threads);
    Timing pt = timed([&] { return lunepv::mc::mc_estimate_f(0.5, 20000000, 11).mean; });
    report("mc full 2e7", st, pt);
  }
  return 0;
}
