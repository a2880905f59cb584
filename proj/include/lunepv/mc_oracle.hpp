#pragma once

#include <cstdint>
#include <functional>

namespace lunepv::mc {

// Seeded Monte Carlo estimate.  Fixed (inputs, samples, seed) give bitwise
// identical results for any worker count: per-sample randomness is
// counter-based and block partial sums are combined in block order.
struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// Low-precision oracle for the inner disk integral: uniform draws on the unit
// disk at (center, 0); draws whose x-mirror also lands in the disk are
// averaged with it so the odd 1/x' part cancels exactly, draws without an
// in-disk mirror are used singly (no pole is reachable there).
McEstimate mc_estimate_inner(double x, double y, double center,
                             std::uint64_t samples, std::uint64_t seed);

// Low-precision oracle for F(a), 0 < |a| < 1: outer draws on the bounding box
// with sign from the moon classification, mirrored in x antithetically; the
// inner pair is estimated by a nested disk-difference MC with derived
// sub-seeds.  `samples` is the total inner-draw budget; the outer sample
// count (reported in the result) is samples / (4 * 256).
McEstimate mc_estimate_f(double a, std::uint64_t samples, std::uint64_t seed);

// Plain MC mean of f over the unit disk at (center, 0), scaled by the disk
// area.  Sampler test hook.
McEstimate mc_disk_integral(double center, std::uint64_t samples, std::uint64_t seed,
                            const std::function<double(double, double)>& f);

// PV-paired MC of numerator(x', y') / x' over the same disk, with the mirror
// pairing used by mc_estimate_inner.  Sampler test hook.
McEstimate mc_disk_pv(double center, std::uint64_t samples, std::uint64_t seed,
                      const std::function<double(double, double)>& numerator);

}  // namespace lunepv::mc
