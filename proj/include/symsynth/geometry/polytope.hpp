#ifndef SYMSYNTH_GEOMETRY_POLYTOPE_HPP
#define SYMSYNTH_GEOMETRY_POLYTOPE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "symsynth/geometry/box.hpp"
#include "symsynth/geometry/lp.hpp"
#include "symsynth/geometry/polygon.hpp"

namespace symsynth::geometry {

/// Vertical prism over a convex polygon: positions (first two coordinates)
/// in `polygon`, heading (third coordinate) in `heading`.
struct Prism {
  std::vector<Vec2> polygon;  // counter-clockwise
  Interval heading;
};

/// H-representation polytope {x : normals[k] . x <= offsets[k]}.
///
/// Polytopes built from a box or a prism remember that structure so that the
/// hot intersection tests can skip the LP.
template <std::size_t N>
class Polytope {
 public:
  Polytope() = default;

  Polytope(std::vector<Point<N>> normals, std::vector<double> offsets)
      : normals_(std::move(normals)), offsets_(std::move(offsets)) {
    validate();
  }

  static Polytope from_box(const Box<N>& b) {
    Polytope p;
    for (std::size_t i = 0; i < N; ++i) {
      Point<N> up{};
      up[i] = 1.0;
      Point<N> down{};
      down[i] = -1.0;
      p.normals_.push_back(up);
      p.offsets_.push_back(b.upper[i]);
      p.normals_.push_back(down);
      p.offsets_.push_back(-b.lower[i]);
    }
    p.box_ = b;
    return p;
  }

  /// The empty set, represented by the single constraint 0 <= -1.
  static Polytope empty() {
    Polytope p;
    p.normals_.push_back(Point<N>{});
    p.offsets_.push_back(-1.0);
    return p;
  }

  static Polytope from_prism(Prism prism)
    requires(N == 3)
  {
    Polytope p;
    const auto& poly = prism.polygon;
    const std::size_t n = poly.size();
    if (n >= 3) {
      for (std::size_t i = 0; i < n; ++i) {
        const Vec2 nrm = edge_normal(poly[i], poly[(i + 1) % n]);
        p.normals_.push_back({nrm[0], nrm[1], 0.0});
        p.offsets_.push_back(nrm[0] * poly[i][0] + nrm[1] * poly[i][1]);
      }
    } else {
      // Degenerate footprint: describe its bounding box.
      Vec2 lo = poly.at(0), hi = poly.at(0);
      for (const auto& v : poly) {
        lo = {std::min(lo[0], v[0]), std::min(lo[1], v[1])};
        hi = {std::max(hi[0], v[0]), std::max(hi[1], v[1])};
      }
      p.normals_.insert(p.normals_.end(), {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}});
      p.offsets_.insert(p.offsets_.end(), {hi[0], -lo[0], hi[1], -lo[1]});
    }
    p.normals_.push_back({0.0, 0.0, 1.0});
    p.offsets_.push_back(prism.heading.hi);
    p.normals_.push_back({0.0, 0.0, -1.0});
    p.offsets_.push_back(-prism.heading.lo);
    p.prism_ = std::move(prism);
    return p;
  }

  [[nodiscard]] const std::vector<Point<N>>& normals() const { return normals_; }
  [[nodiscard]] const std::vector<double>& offsets() const { return offsets_; }
  [[nodiscard]] std::size_t size() const { return offsets_.size(); }
  [[nodiscard]] const std::optional<Box<N>>& box_form() const { return box_; }
  [[nodiscard]] const std::optional<Prism>& prism_form() const { return prism_; }

  [[nodiscard]] bool contains(const Point<N>& x, double tol = 0.0) const {
    for (std::size_t k = 0; k < offsets_.size(); ++k) {
      if (dot(normals_[k], x) > offsets_[k] + tol) return false;
    }
    return true;
  }

  /// Intersection of two polytopes (constraint concatenation).
  [[nodiscard]] Polytope intersect(const Polytope& o) const {
    Polytope p;
    p.normals_ = normals_;
    p.offsets_ = offsets_;
    p.normals_.insert(p.normals_.end(), o.normals_.begin(), o.normals_.end());
    p.offsets_.insert(p.offsets_.end(), o.offsets_.begin(), o.offsets_.end());
    return p;
  }

  /// Empty-set detection by LP (free variables split into positive parts).
  [[nodiscard]] bool is_empty() const {
    if (box_) return false;
    std::vector<std::vector<double>> a;
    a.reserve(offsets_.size());
    for (const auto& n : normals_) {
      std::vector<double> row(2 * N);
      for (std::size_t i = 0; i < N; ++i) {
        row[i] = n[i];
        row[N + i] = -n[i];
      }
      a.push_back(std::move(row));
    }
    return solve_lp(a, offsets_, std::vector<double>(2 * N, 0.0)).status == LpStatus::Infeasible;
  }

  static double dot(const Point<N>& a, const Point<N>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
    return s;
  }

 private:
  void validate() const {
    if (normals_.size() != offsets_.size()) {
      throw GeometryError("polytope: normal and offset counts differ");
    }
    for (std::size_t k = 0; k < offsets_.size(); ++k) {
      bool zero = true;
      for (double v : normals_[k]) {
        if (!std::isfinite(v)) throw GeometryError("polytope: non-finite facet normal");
        zero = zero && v == 0.0;
      }
      if (!std::isfinite(offsets_[k])) throw GeometryError("polytope: non-finite facet offset");
      if (zero && offsets_[k] >= 0.0) {
        throw GeometryError("polytope: degenerate facet with zero normal");
      }
    }
  }

  std::vector<Point<N>> normals_;
  std::vector<double> offsets_;
  std::optional<Box<N>> box_;
  std::optional<Prism> prism_;
};

namespace detail {

/// Rows of {normals . x <= offsets, lower <= x <= upper} after shifting
/// x = lower + y with y >= 0.
template <std::size_t N>
void shifted_system(const Polytope<N>& p, const Box<N>& b, std::vector<std::vector<double>>& a,
                    std::vector<double>& rhs) {
  for (std::size_t k = 0; k < p.size(); ++k) {
    std::vector<double> row(N);
    for (std::size_t i = 0; i < N; ++i) row[i] = p.normals()[k][i];
    a.push_back(std::move(row));
    rhs.push_back(p.offsets()[k] - Polytope<N>::dot(p.normals()[k], b.lower));
  }
  for (std::size_t i = 0; i < N; ++i) {
    std::vector<double> row(N, 0.0);
    row[i] = 1.0;
    a.push_back(std::move(row));
    rhs.push_back(b.upper[i] - b.lower[i]);
  }
}

}  // namespace detail

/// True iff {normals . x <= offsets} and the closed box share a point.
template <std::size_t N>
[[nodiscard]] bool polytope_intersects_box(const Polytope<N>& p, const Box<N>& b) {
  if (p.box_form()) return box_intersects(*p.box_form(), b);
  if constexpr (N == 3) {
    if (p.prism_form()) {
      const Prism& pr = *p.prism_form();
      if (!pr.heading.intersects(b[2])) return false;
      return polygon_intersects_rect(pr.polygon, {b.lower[0], b.lower[1]},
                                     {b.upper[0], b.upper[1]});
    }
  }
  std::vector<std::vector<double>> a;
  std::vector<double> rhs;
  detail::shifted_system(p, b, a, rhs);
  return solve_lp(a, rhs, std::vector<double>(N, 0.0)).status != LpStatus::Infeasible;
}

/// Bounding box of p clipped to `clip`; empty optional if they do not meet.
template <std::size_t N>
[[nodiscard]] std::optional<Box<N>> bounding_box(const Polytope<N>& p, const Box<N>& clip) {
  if (p.box_form()) {
    const Box<N>& b = *p.box_form();
    if (!box_intersects(b, clip)) return std::nullopt;
    Box<N> out;
    for (std::size_t i = 0; i < N; ++i) {
      out.lower[i] = std::max(b.lower[i], clip.lower[i]);
      out.upper[i] = std::min(b.upper[i], clip.upper[i]);
    }
    return out;
  }
  std::vector<std::vector<double>> a;
  std::vector<double> rhs;
  detail::shifted_system(p, clip, a, rhs);
  Box<N> out;
  for (std::size_t i = 0; i < N; ++i) {
    std::vector<double> c(N, 0.0);
    c[i] = 1.0;
    const LpResult hi = solve_lp(a, rhs, c);
    if (hi.status == LpStatus::Infeasible) return std::nullopt;
    c[i] = -1.0;
    const LpResult lo = solve_lp(a, rhs, c);
    out.upper[i] = clip.lower[i] + hi.value;
    out.lower[i] = clip.lower[i] - lo.value;
  }
  return out;
}

/// Euclidean projection of q onto p (Dykstra's alternating projections).
/// Precondition: p is non-empty.
template <std::size_t N>
[[nodiscard]] Point<N> project_onto(const Polytope<N>& p, const Point<N>& q, double tol = 1e-12,
                                    int max_sweeps = 20000) {
  if (p.box_form()) {
    Point<N> x = q;
    for (std::size_t i = 0; i < N; ++i) {
      x[i] = std::clamp(x[i], p.box_form()->lower[i], p.box_form()->upper[i]);
    }
    return x;
  }
  const std::size_t m = p.size();
  std::vector<Point<N>> corr(m, Point<N>{});
  Point<N> x = q;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const auto& n = p.normals()[k];
      const double nn = Polytope<N>::dot(n, n);
      if (nn == 0.0) continue;
      Point<N> y{};
      for (std::size_t i = 0; i < N; ++i) y[i] = x[i] + corr[k][i];
      const double viol = Polytope<N>::dot(n, y) - p.offsets()[k];
      Point<N> nx = y;
      if (viol > 0.0) {
        for (std::size_t i = 0; i < N; ++i) nx[i] -= viol / nn * n[i];
      }
      for (std::size_t i = 0; i < N; ++i) {
        corr[k][i] = y[i] - nx[i];
        change = std::max(change, std::abs(nx[i] - x[i]));
      }
      x = nx;
    }
    if (change < tol) break;
  }
  return x;
}

}  // namespace symsynth::geometry

#endif  // SYMSYNTH_GEOMETRY_POLYTOPE_HPP
