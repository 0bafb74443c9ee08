#ifndef SYMSYNTH_ABSTRACTION_RELATIVE_HPP
#define SYMSYNTH_ABSTRACTION_RELATIVE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "symsynth/abstraction/classify.hpp"
#include "symsynth/abstraction/grid.hpp"
#include "symsynth/geometry/interval.hpp"
#include "symsynth/geometry/polytope.hpp"
#include "symsynth/geometry/rigid.hpp"
#include "symsynth/symmetry/se2.hpp"

namespace symsynth::abstraction {

using geometry::Interval;
using geometry::Polytope;
using geometry::Vec3;

/// A cell seen from its own moving frames.
struct RelState {
  CellId cell = 0;
  Box<3> rel_cell;                     // image of the cell on the cross-section
  std::vector<Polytope<3>> rel_avoid;  // covers the avoid set seen from every frame in the cell
  Polytope<3> rel_reach;               // seen as reach set from every frame in the cell
  bool reach_empty = true;
  Vec3 target{};                       // reach point closest to the origin, used to rank controls
};

namespace detail {

/// Shift [lo, hi] by a multiple of 2*pi so that it lies as close to zero as possible.
[[nodiscard]] inline Interval nearest_heading_copy(Interval iv) {
  const double k = std::round(iv.mid() / geometry::kTwoPi);
  return {iv.lo - k * geometry::kTwoPi, iv.hi - k * geometry::kTwoPi};
}

/// Headings spanning a full turn are replaced by a range wide enough to
/// cover any relative heading a tube can have.
inline constexpr double kAllHeadings = 4.0 * geometry::kPi;

[[nodiscard]] inline std::vector<Polytope<3>> relative_avoid(const Box<3>& cell,
                                                             const Box<3>& avoid) {
  const Interval frames{-cell.upper[2], -cell.lower[2]};
  const Box<3> diff({avoid.lower[0] - cell.upper[0], avoid.lower[1] - cell.upper[1], 0.0},
                    {avoid.upper[0] - cell.lower[0], avoid.upper[1] - cell.lower[1], 0.0});
  const Interval heading{avoid.lower[2] + frames.lo, avoid.upper[2] + frames.hi};
  const Polytope<3> shape = geometry::rotate_box_outer_prism(diff, frames);
  geometry::Prism base = *shape.prism_form();
  std::vector<Polytope<3>> out;
  if (heading.width() >= geometry::kTwoPi) {
    base.heading = {-kAllHeadings, kAllHeadings};
    out.push_back(Polytope<3>::from_prism(std::move(base)));
    return out;
  }
  const Interval centred = nearest_heading_copy(heading);
  for (int k = -1; k <= 1; ++k) {
    geometry::Prism p = base;
    p.heading = {centred.lo + k * geometry::kTwoPi, centred.hi + k * geometry::kTwoPi};
    out.push_back(Polytope<3>::from_prism(std::move(p)));
  }
  return out;
}

/// Inner bound of the reach box seen from every frame in the cell.
///
/// A relative point z qualifies when R(theta) z + p lies in the reach box for
/// every frame (p, theta). Over p this is exact: R(theta) z must lie in the
/// reach box shrunk by the cell's planar extent. Over theta it suffices to
/// check the two end headings against that box shrunk once more by the
/// sagitta, because R(theta) z then stays within the sagitta of the chord.
[[nodiscard]] inline Polytope<3> relative_reach(const Box<3>& cell, const Box<3>& reach) {
  double lo0 = reach.lower[0] - cell.lower[0];
  double hi0 = reach.upper[0] - cell.upper[0];
  double lo1 = reach.lower[1] - cell.lower[1];
  double hi1 = reach.upper[1] - cell.upper[1];
  Interval heading{reach.lower[2] - cell.lower[2], reach.upper[2] - cell.upper[2]};
  if (lo0 > hi0 || lo1 > hi1 || heading.lo > heading.hi) return Polytope<3>::empty();
  const double r = std::max(std::hypot(std::max(std::abs(lo0), std::abs(hi0)),
                                       std::max(std::abs(lo1), std::abs(hi1))),
                            0.0);
  const double width = cell.upper[2] - cell.lower[2];
  const double s = geometry::sagitta(r, width) +
                   (width > 0.0 ? 4.0 * std::numeric_limits<double>::epsilon() * (r + 1.0) : 0.0);
  lo0 += s;
  hi0 -= s;
  lo1 += s;
  hi1 -= s;
  if (lo0 > hi0 || lo1 > hi1) return Polytope<3>::empty();
  heading = reach.upper[2] - reach.lower[2] >= geometry::kTwoPi
                ? Interval{-detail::kAllHeadings, detail::kAllHeadings}
                : nearest_heading_copy(heading);

  std::vector<Vec3> normals;
  std::vector<double> offsets;
  auto add = [&](const Vec3& n, double o) {
    normals.push_back(n);
    offsets.push_back(o);
  };
  const double ends[2] = {cell.lower[2], cell.upper[2]};
  for (int e = 0; e < (width > 0.0 ? 2 : 1); ++e) {
    const double c = std::cos(ends[e]);
    const double sn = std::sin(ends[e]);
    // (R z)_0 = c z0 - s z1,  (R z)_1 = s z0 + c z1
    add({c, -sn, 0.0}, hi0);
    add({-c, sn, 0.0}, -lo0);
    add({sn, c, 0.0}, hi1);
    add({-sn, -c, 0.0}, -lo1);
  }
  add({0.0, 0.0, 1.0}, heading.hi);
  add({0.0, 0.0, -1.0}, -heading.lo);
  return Polytope<3>(std::move(normals), std::move(offsets));
}

}  // namespace detail

/// Relative geometry of one cell.
[[nodiscard]] inline RelState make_rel_state(const Scene& scene, CellId cell) {
  RelState s;
  s.cell = cell;
  s.rel_cell = Box<3>::point({0.0, 0.0, 0.0});
  const Box<3> box = scene.grid.cell_box(cell);
  for (const auto& a : scene.avoid) {
    for (auto& p : detail::relative_avoid(box, a)) s.rel_avoid.push_back(std::move(p));
  }
  s.rel_reach = detail::relative_reach(box, scene.reach);
  s.reach_empty = s.rel_reach.is_empty();
  if (!s.reach_empty) {
    s.target = geometry::project_onto(s.rel_reach, Vec3{0.0, 0.0, 0.0}, 1e-10, 5000);
  } else {
    // Fall back to the reach box seen from the cell centre.
    const Vec3 c = box.center();
    Box<3> seen = scene.reach;
    const Interval h = detail::nearest_heading_copy({seen.lower[2] - c[2], seen.upper[2] - c[2]});
    seen.lower[2] = h.lo + c[2];
    seen.upper[2] = h.hi + c[2];
    const Polytope<3> rel = geometry::transform_polytope(Polytope<3>::from_box(seen), symmetry::frame_of(c).motion());
    s.target = geometry::project_onto(rel, Vec3{0.0, 0.0, 0.0}, 1e-10, 5000);
  }
  return s;
}

/// One relative state per grid cell, in cell order.
[[nodiscard]] inline std::vector<RelState> build_rel_states(const Scene& scene) {
  std::vector<RelState> out;
  out.reserve(scene.grid.size());
  for (std::size_t c = 0; c < scene.grid.size(); ++c) {
    out.push_back(make_rel_state(scene, static_cast<CellId>(c)));
  }
  return out;
}

}  // namespace symsynth::abstraction

#endif  // SYMSYNTH_ABSTRACTION_RELATIVE_HPP
