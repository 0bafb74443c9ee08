#ifndef SYMSYNTH_GEOMETRY_POLYGON_HPP
#define SYMSYNTH_GEOMETRY_POLYGON_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "symsynth/geometry/box.hpp"

namespace symsynth::geometry {

using Vec2 = std::array<double, 2>;

[[nodiscard]] inline double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

[[nodiscard]] inline Vec2 rotate2(const Vec2& p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p[0] - s * p[1], s * p[0] + c * p[1]};
}

/// Convex hull (counter-clockwise, collinear points dropped) by monotone chain.
[[nodiscard]] inline std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0.0) --k;
    h[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (k >= lower && cross(h[k - 2], h[k - 1], *it) <= 0.0) --k;
    h[k++] = *it;
  }
  h.resize(k - 1);
  return h;
}

/// Outward unit normal of edge a->b of a counter-clockwise polygon.
[[nodiscard]] inline Vec2 edge_normal(const Vec2& a, const Vec2& b) {
  const double dx = b[0] - a[0];
  const double dy = b[1] - a[1];
  const double len = std::hypot(dx, dy);
  return {dy / len, -dx / len};
}

/// Push every edge of a convex counter-clockwise polygon outward by `by` and
/// return the mitered vertices. The result contains the polygon's Minkowski
/// sum with a disk of radius `by`.
[[nodiscard]] inline std::vector<Vec2> offset_polygon(const std::vector<Vec2>& poly, double by) {
  const std::size_t n = poly.size();
  if (by == 0.0 || n < 3) {
    if (by == 0.0 || n == 0) return poly;
    // Degenerate hull (point or segment): fall back to its inflated bounding box.
    Vec2 lo = poly[0], hi = poly[0];
    for (const auto& p : poly) {
      lo = {std::min(lo[0], p[0]), std::min(lo[1], p[1])};
      hi = {std::max(hi[0], p[0]), std::max(hi[1], p[1])};
    }
    return {{lo[0] - by, lo[1] - by}, {hi[0] + by, lo[1] - by}, {hi[0] + by, hi[1] + by},
            {lo[0] - by, hi[1] + by}};
  }
  std::vector<Vec2> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& prev = poly[(i + n - 1) % n];
    const Vec2& cur = poly[i];
    const Vec2& next = poly[(i + 1) % n];
    const Vec2 n1 = edge_normal(prev, cur);
    const Vec2 n2 = edge_normal(cur, next);
    const double c1 = n1[0] * cur[0] + n1[1] * cur[1] + by;
    const double c2 = n2[0] * cur[0] + n2[1] * cur[1] + by;
    const double det = n1[0] * n2[1] - n1[1] * n2[0];
    out[i] = {(c1 * n2[1] - c2 * n1[1]) / det, (n1[0] * c2 - n2[0] * c1) / det};
  }
  return out;
}

/// Exact closed-set intersection test between a convex polygon and an
/// axis-aligned rectangle (separating axis theorem).
[[nodiscard]] inline bool polygon_intersects_rect(const std::vector<Vec2>& poly, const Vec2& lo,
                                                  const Vec2& hi) {
  if (poly.empty()) return false;
  Vec2 plo = poly[0], phi = poly[0];
  for (const auto& p : poly) {
    plo = {std::min(plo[0], p[0]), std::min(plo[1], p[1])};
    phi = {std::max(phi[0], p[0]), std::max(phi[1], p[1])};
  }
  if (plo[0] > hi[0] || phi[0] < lo[0] || plo[1] > hi[1] || phi[1] < lo[1]) return false;
  const std::size_t n = poly.size();
  if (n == 1) return true;
  const std::array<Vec2, 4> rect{{{lo[0], lo[1]}, {hi[0], lo[1]}, {hi[0], hi[1]}, {lo[0], hi[1]}}};
  if (n == 2) {
    const Vec2 nrm = edge_normal(poly[0], poly[1]);
    const double c = nrm[0] * poly[0][0] + nrm[1] * poly[0][1];
    double rmin = nrm[0] * rect[0][0] + nrm[1] * rect[0][1];
    double rmax = rmin;
    for (const auto& r : rect) {
      const double v = nrm[0] * r[0] + nrm[1] * r[1];
      rmin = std::min(rmin, v);
      rmax = std::max(rmax, v);
    }
    return rmin <= c && c <= rmax;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 nrm = edge_normal(poly[i], poly[(i + 1) % n]);
    const double edge_max = nrm[0] * poly[i][0] + nrm[1] * poly[i][1];
    double rect_min = nrm[0] * rect[0][0] + nrm[1] * rect[0][1];
    for (const auto& r : rect) rect_min = std::min(rect_min, nrm[0] * r[0] + nrm[1] * r[1]);
    if (rect_min > edge_max) return false;
  }
  return true;
}

}  // namespace symsynth::geometry

#endif  // SYMSYNTH_GEOMETRY_POLYGON_HPP
