#include "lunepv/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lunepv/geometry.hpp"
#include "lunepv/rng.hpp"

namespace lunepv::mc {

namespace {

constexpr std::uint64_t kBlock = 1 << 16;
constexpr std::uint64_t kInnerSamples = 256;  // nested draws per disk per outer sample

struct Acc {
  double s = 0.0;
  double s2 = 0.0;
};

// Runs per_sample over [0, n) in fixed-size blocks.  Blocks may execute on
// any thread; partial sums are combined in block order, so the result is
// bitwise independent of the worker count.
template <class PerSample>
McEstimate run_blocks(std::uint64_t n, std::uint64_t seed, PerSample&& per_sample) {
  const std::uint64_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<Acc> acc(nblocks);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
    const std::uint64_t beg = static_cast<std::uint64_t>(b) * kBlock;
    const std::uint64_t end = std::min(n, beg + kBlock);
    Acc a;
    for (std::uint64_t i = beg; i < end; ++i) {
      const double v = per_sample(i);
      a.s += v;
      a.s2 += v * v;
    }
    acc[static_cast<std::size_t>(b)] = a;
  }

  double s = 0.0, s2 = 0.0;
  for (const Acc& a : acc) {
    s += a.s;
    s2 += a.s2;
  }
  McEstimate est;
  est.samples = n;
  est.seed = seed;
  est.mean = s / static_cast<double>(n);
  const double var =
      std::max(0.0, s2 / static_cast<double>(n) - est.mean * est.mean);
  est.std_err = (n > 1) ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
  return est;
}

double kern(double u, double s) {
  const double d = u * u + s * s;
  if (d == 0.0) return 0.0;
  return u / d;
}

// One PV-paired draw of numerator(x', y') / x' on the disk at (center, 0).
template <class Numer>
double pv_disk_sample(double center, std::uint64_t seed, std::uint64_t i,
                      const Numer& numer) {
  const double u1 = rng::uniform01(seed, i, 0);
  const double u2 = rng::uniform01(seed, i, 1);
  const double r = std::sqrt(u1);
  const double th = 2.0 * M_PI * u2;
  const double xp = center + r * std::cos(th);
  const double yp = r * std::sin(th);
  if (xp == 0.0) return 0.0;
  const double mirror = (xp + center) * (xp + center) + yp * yp;
  if (mirror < 1.0) return 0.5 * (numer(xp, yp) - numer(-xp, yp)) / xp;
  return numer(xp, yp) / xp;
}

double inner_sample(double x, double y, double center, std::uint64_t seed,
                    std::uint64_t i) {
  auto numer = [x, y](double xp, double yp) { return kern(x - xp, y + yp); };
  return M_PI * pv_disk_sample(center, seed, i, numer);
}

// Serial nested estimate used inside the outer F sampler.
double inner_mean_serial(double x, double y, double center, std::uint64_t n,
                         std::uint64_t seed) {
  double s = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) s += inner_sample(x, y, center, seed, i);
  return s / static_cast<double>(n);
}

}  // namespace

McEstimate mc_estimate_inner(double x, double y, double center, std::uint64_t samples,
                             std::uint64_t seed) {
  if (!(std::isfinite(x) && std::isfinite(y) && std::isfinite(center)))
    throw std::domain_error("mc_estimate_inner: non-finite input");
  if (samples < 10000)
    throw std::domain_error("mc_estimate_inner: need at least 1e4 samples");
  return run_blocks(samples, seed, [&](std::uint64_t i) {
    return inner_sample(x, y, center, seed, i);
  });
}

McEstimate mc_estimate_f(double a, std::uint64_t samples, std::uint64_t seed) {
  if (!std::isfinite(a)) throw std::domain_error("mc_estimate_f: non-finite a");
  if (a == 0.0) throw std::domain_error("mc_estimate_f: moons empty at a = 0");
  if (!(std::abs(a) < 1.0))
    throw std::domain_error("mc_estimate_f: requires 0 < |a| < 1");
  if (samples < 1000000)
    throw std::domain_error("mc_estimate_f: need at least 1e6 samples");

  const std::uint64_t outer = samples / (4 * kInnerSamples);
  const double half_w = 1.0 + std::abs(a);
  const double box_area = (2.0 * half_w) * 2.0;

  auto signed_phi = [&](double x, double y, int d, std::uint64_t s0, std::uint64_t s1) {
    if (d == 0) return 0.0;
    const double jp = inner_mean_serial(x, y, +a, kInnerSamples, s0);
    const double jm = inner_mean_serial(x, y, -a, kInnerSamples, s1);
    return box_area * static_cast<double>(d) * (jp - jm) / (x * x);
  };

  McEstimate est = run_blocks(outer, seed, [&](std::uint64_t i) {
    const double x = -half_w + 2.0 * half_w * rng::uniform01(seed, i, 0);
    const double y = -1.0 + 2.0 * rng::uniform01(seed, i, 1);
    const int d = geometry::delta({x, y}, a);
    // x-mirror antithetic pair; the mirrored point sits in the opposite moon.
    const double v0 = signed_phi(x, y, d, rng::subseed(seed, i, 0),
                                 rng::subseed(seed, i, 1));
    const double v1 = signed_phi(-x, y, -d, rng::subseed(seed, i, 2),
                                 rng::subseed(seed, i, 3));
    return 0.5 * (v0 + v1);
  });
  est.seed = seed;
  return est;
}

McEstimate mc_disk_integral(double center, std::uint64_t samples, std::uint64_t seed,
                            const std::function<double(double, double)>& f) {
  if (samples == 0) throw std::domain_error("mc_disk_integral: samples must be > 0");
  McEstimate est = run_blocks(samples, seed, [&](std::uint64_t i) {
    const double r = std::sqrt(rng::uniform01(seed, i, 0));
    const double th = 2.0 * M_PI * rng::uniform01(seed, i, 1);
    return M_PI * f(center + r * std::cos(th), r * std::sin(th));
  });
  return est;
}

McEstimate mc_disk_pv(double center, std::uint64_t samples, std::uint64_t seed,
                      const std::function<double(double, double)>& numerator) {
  if (samples == 0) throw std::domain_error("mc_disk_pv: samples must be > 0");
  return run_blocks(samples, seed, [&](std::uint64_t i) {
    return M_PI * pv_disk_sample(center, seed, i, numerator);
  });
}

}  // namespace lunepv::mc
