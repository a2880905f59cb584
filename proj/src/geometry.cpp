#include "lunepv/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lunepv::geometry {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::domain_error(std::string("non-finite ") + what);
}

}  // namespace

RegionClass classify_point(Point p, double a, double boundary_tol) {
  require_finite(p.x, "x");
  require_finite(p.y, "y");
  require_finite(a, "a");
  if (!(boundary_tol >= 0.0)) throw std::domain_error("boundary_tol must be >= 0");

  const double rp = std::hypot(p.x - a, p.y);  // distance to center (+a, 0)
  const double rm = std::hypot(p.x + a, p.y);  // distance to center (-a, 0)
  if (std::abs(rp - 1.0) <= boundary_tol || std::abs(rm - 1.0) <= boundary_tol)
    return RegionClass::Boundary;
  const bool in_p = rp < 1.0;
  const bool in_m = rm < 1.0;
  if (in_p && !in_m) return RegionClass::RightMoon;
  if (!in_p && in_m) return RegionClass::LeftMoon;
  if (in_p && in_m) return RegionClass::Lens;
  return RegionClass::Exterior;
}

int delta(Point p, double a) {
  switch (classify_point(p, a, kBoundaryTol)) {
    case RegionClass::RightMoon:
      return 1;
    case RegionClass::LeftMoon:
      return -1;
    default:
      return 0;
  }
}

std::optional<std::pair<double, double>> touch_points(double a) {
  require_finite(a, "a");
  if (std::abs(a) >= 1.0) return std::nullopt;
  const double s = std::sqrt((1.0 - a) * (1.0 + a));
  return std::make_pair(s, -s);
}

Slab moon_slab(double y, double a, Side side) {
  require_finite(y, "y");
  require_finite(a, "a");

  Slab slab;
  if (std::abs(y) >= 1.0 || a == 0.0) return slab;

  const double w = std::sqrt((1.0 - y) * (1.0 + y));  // chord half-width at this y
  const double c = (side == Side::Right) ? a : -a;    // this moon's circle center
  const double o = -c;                                // the other center

  const double lo = c - w, hi = c + w;
  const double olo = o - w, ohi = o + w;
  const bool overlap = std::max(lo, olo) < std::min(hi, ohi);
  if (!overlap) {
    slab.intervals.push_back({lo, hi});
  } else if (c > o) {
    if (ohi < hi) slab.intervals.push_back({ohi, hi});
  } else {
    if (lo < olo) slab.intervals.push_back({lo, olo});
  }
  return slab;
}

double moon_area(double a) {
  require_finite(a, "a");
  const double t = std::abs(a);
  if (t >= 1.0) return M_PI;
  const double lens = 2.0 * std::acos(t) - 2.0 * t * std::sqrt((1.0 - t) * (1.0 + t));
  return M_PI - lens;
}

}  // namespace lunepv::geometry
