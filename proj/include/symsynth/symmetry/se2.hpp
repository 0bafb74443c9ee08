#ifndef SYMSYNTH_SYMMETRY_SE2_HPP
#define SYMSYNTH_SYMMETRY_SE2_HPP

#include <cmath>

#include "symsynth/geometry/box.hpp"
#include "symsynth/geometry/interval.hpp"
#include "symsynth/geometry/rigid.hpp"

namespace symsynth::symmetry {

using geometry::Box;
using geometry::Vec3;

/// Element of SE(2) acting on (north, east, heading) states, on disturbances
/// by rotation, and trivially on body-frame controls.
struct GroupElement {
  double heading = 0.0;
  double north = 0.0;
  double east = 0.0;

  [[nodiscard]] static GroupElement identity() { return {}; }

  [[nodiscard]] Vec3 anchor() const { return {north, east, heading}; }

  [[nodiscard]] geometry::RigidMotion2 motion() const { return {heading, north, east}; }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

/// The frame that sends x to the origin: heading theta_x, anchor x.
[[nodiscard]] inline GroupElement frame_of(const Vec3& x) { return {x[2], x[0], x[1]}; }

/// pos' = R(h)^T (pos - anchor), heading' = wrap(heading - h).
[[nodiscard]] inline Vec3 apply_state(const GroupElement& g, const Vec3& x) {
  Vec3 y = g.motion().to_frame(x);
  y[2] = geometry::wrap_angle(y[2]);
  return y;
}

[[nodiscard]] inline Vec3 apply_inverse_state(const GroupElement& g, const Vec3& y) {
  Vec3 x = g.motion().from_frame(y);
  x[2] = geometry::wrap_angle(x[2]);
  return x;
}

/// Disturbance map: planar part rotated into the frame, heading part unchanged.
[[nodiscard]] inline Vec3 psi(const GroupElement& g, const Vec3& w) {
  const double c = std::cos(g.heading);
  const double s = std::sin(g.heading);
  return {c * w[0] + s * w[1], -s * w[0] + c * w[1], w[2]};
}

[[nodiscard]] inline Vec3 psi_inverse(const GroupElement& g, const Vec3& w) {
  const double c = std::cos(g.heading);
  const double s = std::sin(g.heading);
  return {c * w[0] - s * w[1], s * w[0] + c * w[1], w[2]};
}

/// Element whose action is apply_state(a, apply_state(b, .)).
[[nodiscard]] inline GroupElement compose(const GroupElement& a, const GroupElement& b) {
  const double c = std::cos(b.heading);
  const double s = std::sin(b.heading);
  return {geometry::wrap_angle(a.heading + b.heading), b.north + c * a.north - s * a.east,
          b.east + s * a.north + c * a.east};
}

[[nodiscard]] inline GroupElement inverse(const GroupElement& g) {
  const double c = std::cos(g.heading);
  const double s = std::sin(g.heading);
  return {geometry::wrap_angle(-g.heading), -(c * g.north + s * g.east),
          -(-s * g.north + c * g.east)};
}

/// Outer bound of the union, over every state x in `cell`, of the frame
/// inverse of `rel` (a box in relative coordinates). The heading coordinate is
/// left unwrapped.
[[nodiscard]] inline Box<3> box_from_cell(const Box<3>& rel, const Box<3>& cell) {
  const Box<3> rotated = geometry::rotate_box_outer(rel, cell[2]);
  return Box<3>({cell.lower[0] + rotated.lower[0], cell.lower[1] + rotated.lower[1],
                 rotated.lower[2]},
                {cell.upper[0] + rotated.upper[0], cell.upper[1] + rotated.upper[1],
                 rotated.upper[2]});
}

/// Outer bound of the disturbance set seen from every frame: the union of
/// psi_g(w) over all headings.
[[nodiscard]] inline Box<3> disturbance_over_all_frames(const Box<3>& w) {
  // The union over all headings is the disk through the farthest corner; one
  // ulp on the radius covers the rounding of hypot.
  const double r = std::nextafter(geometry::max_planar_radius(w), HUGE_VAL);
  return Box<3>({-r, -r, w.lower[2]}, {r, r, w.upper[2]});
}

}  // namespace symsynth::symmetry

#endif  // SYMSYNTH_SYMMETRY_SE2_HPP
