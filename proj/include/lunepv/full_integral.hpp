#pragma once

#include <cstdint>
#include <vector>

#include "lunepv/quadrature.hpp"

namespace lunepv::full {

using quadrature::Exec;
using quadrature::QuadConfig;

struct FResult {
  double a = 0.0;
  double value = 0.0;
  double abs_err = 0.0;
  std::uint64_t evals = 0;
  bool converged = false;
  // Finest geometric window width resolved next to a touch point
  // (0 when the configuration has no touch points).
  double touchpoint_window = 0.0;
};

struct ScanRow {
  double a = 0.0;
  FResult f;
  double refinement_delta = 0.0;  // |value change| under the last tolerance tightening
};

struct FConfig {
  QuadConfig quad;                 // outer tolerances; inner levels derive from these
  bool exploit_symmetry = true;    // integrate the right moon only, double it
  double initial_window = 0.1;     // first geometric window width at each touch point
  int max_windows = 44;            // cap on window halvings per touch point side
  Exec exec = Exec::Parallel;
};

// F(a): outer sign-weighted double integral of J(x,y) / x^2 over the moons,
// y split at 0 and at the touch ordinates +-sqrt(1-a^2), x running over moon
// cross-sections only (which exclude x = 0 for every y except the touch
// points).  Panels adjacent to a touch point are refined geometrically with
// ratio 1/2 and the remaining tail is extrapolated from the last windows;
// the tail estimate and its model error enter abs_err.  a = 0 short-circuits
// to exactly 0 with no evaluations.
FResult f_eval(double a, const FConfig& fc);
FResult f_eval(double a, const QuadConfig& cfg, bool exploit_symmetry = true);

// One row per requested a, each with a refinement delta measured against a
// 10x looser rerun.  Per-row failures are recorded in the row, never thrown.
std::vector<ScanRow> scan(const std::vector<double>& a_values, const FConfig& fc);

}  // namespace lunepv::full
