#ifndef SYMSYNTH_GEOMETRY_RIGID_HPP
#define SYMSYNTH_GEOMETRY_RIGID_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "symsynth/geometry/box.hpp"
#include "symsynth/geometry/interval.hpp"
#include "symsynth/geometry/polygon.hpp"
#include "symsynth/geometry/polytope.hpp"

// Planar rigid motions acting on (north, east, heading) states. A motion with
// heading h and anchor (n, e) maps a state x to the frame anchored at (n, e, h):
//   pos' = R(h)^T (pos - (n, e)),   heading' = heading - h,
// with R(h) = [[cos h, -sin h], [sin h, cos h]].

namespace symsynth::geometry {

/// Angle range for interval rotations. Wrap-around is allowed; only the width
/// matters for the swept set.
using AngleInterval = Interval;

/// Sagitta of an arc of radius r spanning `width` radians.
[[nodiscard]] inline double sagitta(double r, double width) {
  return r * (1.0 - std::cos(0.5 * width));
}

[[nodiscard]] inline double max_planar_radius(const Box<3>& b) {
  const double x = std::max(std::abs(b.lower[0]), std::abs(b.upper[0]));
  const double y = std::max(std::abs(b.lower[1]), std::abs(b.upper[1]));
  return std::hypot(x, y);
}

/// Outer bound on the image of b under rotation by every angle in a (first
/// two coordinates rotate about the origin, the third shifts by the angle).
///
/// The rotated box is the hull of its rotated corners, so its bounding box is
/// the union of the bounding boxes of the four corner arcs, which interval
/// cos/sin give exactly. A few ulps per corner absorb rounding.
[[nodiscard]] inline Box<3> rotate_box_outer(const Box<3>& b, const AngleInterval& a) {
  Box<3> out;
  out.lower[2] = b.lower[2] + a.lo;
  out.upper[2] = b.upper[2] + a.hi;
  const double r = max_planar_radius(b);
  double lo0 = 0.0, lo1 = 0.0, hi0 = 0.0, hi1 = 0.0;
  bool first = true;
  for (double x : {b.lower[0], b.upper[0]}) {
    for (double y : {b.lower[1], b.upper[1]}) {
      const double rho = std::hypot(x, y);
      Interval u{0.0, 0.0};
      Interval v{0.0, 0.0};
      if (rho > 0.0) {
        const double phi = std::atan2(y, x);
        const Interval arc{phi + a.lo, phi + a.hi};
        const double pad = 8.0 * std::numeric_limits<double>::epsilon() * (rho + 1.0);
        u = rho * interval_cos(arc);
        v = rho * interval_sin(arc);
        u = {u.lo - pad, u.hi + pad};
        v = {v.lo - pad, v.hi + pad};
      }
      lo0 = first ? u.lo : std::min(lo0, u.lo);
      hi0 = first ? u.hi : std::max(hi0, u.hi);
      lo1 = first ? v.lo : std::min(lo1, v.lo);
      hi1 = first ? v.hi : std::max(hi1, v.hi);
      first = false;
    }
  }
  const double rr = r + 8.0 * std::numeric_limits<double>::epsilon() * (r + 1.0);
  out.lower[0] = std::max(lo0, -rr);
  out.upper[0] = std::min(hi0, rr);
  out.lower[1] = std::max(lo1, -rr);
  out.upper[1] = std::min(hi1, rr);
  return out;
}

/// Outer bound of the same swept set as a prism over a convex polygon:
/// hull of the corners rotated at both interval ends, pushed out by the
/// sagitta. Much tighter than rotate_box_outer for long, far-away boxes.
[[nodiscard]] inline Polytope<3> rotate_box_outer_prism(const Box<3>& b, const AngleInterval& a) {
  const Interval heading{b.lower[2] + a.lo, b.upper[2] + a.hi};
  const double r = max_planar_radius(b);
  if (a.width() >= kPi) {
    return Polytope<3>::from_prism({{{-r, -r}, {r, -r}, {r, r}, {-r, r}}, heading});
  }
  std::vector<Vec2> pts;
  for (double ang : {a.lo, a.hi}) {
    for (double x : {b.lower[0], b.upper[0]}) {
      for (double y : {b.lower[1], b.upper[1]}) pts.push_back(rotate2({x, y}, ang));
    }
  }
  const double pad =
      sagitta(r, a.width()) + 4.0 * std::numeric_limits<double>::epsilon() * (r + 1.0);
  return Polytope<3>::from_prism({offset_polygon(convex_hull(std::move(pts)), pad), heading});
}

/// Rigid motion with a single heading and planar anchor.
struct RigidMotion2 {
  double heading = 0.0;
  double north = 0.0;
  double east = 0.0;

  /// Map a state into this frame (heading not wrapped).
  [[nodiscard]] Vec3 to_frame(const Vec3& x) const {
    const double c = std::cos(heading);
    const double s = std::sin(heading);
    const double dn = x[0] - north;
    const double de = x[1] - east;
    return {c * dn + s * de, -s * dn + c * de, x[2] - heading};
  }

  /// Inverse of to_frame (heading not wrapped).
  [[nodiscard]] Vec3 from_frame(const Vec3& y) const {
    const double c = std::cos(heading);
    const double s = std::sin(heading);
    return {c * y[0] - s * y[1] + north, s * y[0] + c * y[1] + east, y[2] + heading};
  }
};

/// Exact image of p under m.to_frame.
[[nodiscard]] inline Polytope<3> transform_polytope(const Polytope<3>& p, const RigidMotion2& m) {
  const double c = std::cos(m.heading);
  const double s = std::sin(m.heading);
  if (p.prism_form()) {
    Prism pr = *p.prism_form();
    for (auto& v : pr.polygon) {
      const double dn = v[0] - m.north;
      const double de = v[1] - m.east;
      v = {c * dn + s * de, -s * dn + c * de};
    }
    pr.heading = {pr.heading.lo - m.heading, pr.heading.hi - m.heading};
    return Polytope<3>::from_prism(std::move(pr));
  }
  if (p.box_form() && m.heading == 0.0) {
    const Box<3>& b = *p.box_form();
    return Polytope<3>::from_box(Box<3>({b.lower[0] - m.north, b.lower[1] - m.east, b.lower[2]},
                                        {b.upper[0] - m.north, b.upper[1] - m.east, b.upper[2]}));
  }
  // x = from_frame(y): n.x <= o  <=>  (R^T n_pos).y_pos + n_h y_h <= o - n_pos.anchor - n_h h
  std::vector<Vec3> normals;
  std::vector<double> offsets;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Vec3& n = p.normals()[k];
    normals.push_back({c * n[0] + s * n[1], -s * n[0] + c * n[1], n[2]});
    offsets.push_back(p.offsets()[k] - n[0] * m.north - n[1] * m.east - n[2] * m.heading);
  }
  return Polytope<3>(std::move(normals), std::move(offsets));
}

}  // namespace symsynth::geometry

#endif  // SYMSYNTH_GEOMETRY_RIGID_HPP
