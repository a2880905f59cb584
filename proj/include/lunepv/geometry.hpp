#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lunepv/quadrature.hpp"

namespace lunepv::geometry {

using quadrature::Interval;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Classification of a point against the two unit circles centered at
// (+a, 0) and (-a, 0).  "RightMoon" always tracks the circle centered at
// (+a, 0), even when a < 0, so sign experiments in `a` need no re-derived
// geometry.
enum class RegionClass { RightMoon, LeftMoon, Lens, Exterior, Boundary };

// Moon cross-section at fixed y: disjoint open x-intervals, sorted ascending.
struct Slab {
  std::vector<Interval> intervals;
  bool empty() const { return intervals.empty(); }
};

enum class Side { Right, Left };

// Points within this distance of either circle are classified Boundary and
// carry sign 0, so measure-zero sets cannot poison quadrature nodes.
inline constexpr double kBoundaryTol = 1e-12;

RegionClass classify_point(Point p, double a, double boundary_tol);

// Sign function of the two moons: +1 inside the circle at (+a,0) only,
// -1 inside the circle at (-a,0) only, 0 on the lens, the exterior and the
// boundary band.  Pointwise equal to
//   indicator(inside circle at +a) - indicator(inside circle at -a).
int delta(Point p, double a);

// The y ordinates where the two circles cross the vertical axis,
// (+sqrt(1-a^2), -sqrt(1-a^2)); absent when |a| >= 1 (no lens).
std::optional<std::pair<double, double>> touch_points(double a);

Slab moon_slab(double y, double a, Side side);

// Area of one moon: pi - lens area, continuous in a, equal to pi for |a| >= 1.
double moon_area(double a);

}  // namespace lunepv::geometry
