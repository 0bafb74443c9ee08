#ifndef SYMSYNTH_GEOMETRY_BOX_HPP
#define SYMSYNTH_GEOMETRY_BOX_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "symsynth/geometry/interval.hpp"

namespace symsynth::geometry {

template <std::size_t N>
using Point = std::array<double, N>;

using Vec3 = Point<3>;

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed axis-aligned box in R^N.
template <std::size_t N>
struct Box {
  static constexpr std::size_t dim = N;

  Point<N> lower{};
  Point<N> upper{};

  Box() = default;

  /// Throws GeometryError if some lower[i] > upper[i] or a bound is NaN.
  Box(const Point<N>& lo, const Point<N>& hi) : lower(lo), upper(hi) {
    for (std::size_t i = 0; i < N; ++i) {
      if (!(lower[i] <= upper[i])) {
        std::ostringstream msg;
        msg << "box dimension " << i << ": lower " << lower[i] << " exceeds upper " << upper[i];
        throw GeometryError(msg.str());
      }
    }
  }

  static Box point(const Point<N>& p) { return Box(p, p); }

  [[nodiscard]] Interval operator[](std::size_t i) const { return {lower[i], upper[i]}; }

  void set(std::size_t i, const Interval& iv) {
    lower[i] = iv.lo;
    upper[i] = iv.hi;
  }

  [[nodiscard]] Point<N> center() const {
    Point<N> c{};
    for (std::size_t i = 0; i < N; ++i) c[i] = 0.5 * (lower[i] + upper[i]);
    return c;
  }

  [[nodiscard]] Point<N> widths() const {
    Point<N> w{};
    for (std::size_t i = 0; i < N; ++i) w[i] = upper[i] - lower[i];
    return w;
  }

  [[nodiscard]] bool contains(const Point<N>& p) const {
    for (std::size_t i = 0; i < N; ++i) {
      if (p[i] < lower[i] || p[i] > upper[i]) return false;
    }
    return true;
  }

  [[nodiscard]] bool contains(const Box& b) const {
    for (std::size_t i = 0; i < N; ++i) {
      if (b.lower[i] < lower[i] || b.upper[i] > upper[i]) return false;
    }
    return true;
  }

  /// All 2^N corners; bit i of the index selects upper[i].
  [[nodiscard]] std::vector<Point<N>> vertices() const {
    std::vector<Point<N>> out;
    out.reserve(std::size_t{1} << N);
    for (std::size_t mask = 0; mask < (std::size_t{1} << N); ++mask) {
      Point<N> v{};
      for (std::size_t i = 0; i < N; ++i) v[i] = (mask >> i) & 1U ? upper[i] : lower[i];
      out.push_back(v);
    }
    return out;
  }

  [[nodiscard]] Box inflated(const Point<N>& by) const {
    Box b = *this;
    for (std::size_t i = 0; i < N; ++i) {
      b.lower[i] -= by[i];
      b.upper[i] += by[i];
    }
    return b;
  }

  friend bool operator==(const Box&, const Box&) = default;
};

template <std::size_t N>
[[nodiscard]] bool box_intersects(const Box<N>& a, const Box<N>& b) {
  for (std::size_t i = 0; i < N; ++i) {
    if (a.lower[i] > b.upper[i] || b.lower[i] > a.upper[i]) return false;
  }
  return true;
}

template <std::size_t N>
[[nodiscard]] Box<N> hull(const Box<N>& a, const Box<N>& b) {
  Box<N> h;
  for (std::size_t i = 0; i < N; ++i) {
    h.lower[i] = std::min(a.lower[i], b.lower[i]);
    h.upper[i] = std::max(a.upper[i], b.upper[i]);
  }
  return h;
}

/// Minkowski sum of two boxes.
template <std::size_t N>
[[nodiscard]] Box<N> minkowski_sum(const Box<N>& a, const Box<N>& b) {
  Box<N> s;
  for (std::size_t i = 0; i < N; ++i) {
    s.lower[i] = a.lower[i] + b.lower[i];
    s.upper[i] = a.upper[i] + b.upper[i];
  }
  return s;
}

/// Squared Euclidean distance from a point to a box (zero inside).
template <std::size_t N>
[[nodiscard]] double squared_distance(const Box<N>& b, const Point<N>& p) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    double d = 0.0;
    if (p[i] < b.lower[i]) {
      d = b.lower[i] - p[i];
    } else if (p[i] > b.upper[i]) {
      d = p[i] - b.upper[i];
    }
    d2 += d * d;
  }
  return d2;
}

template <std::size_t N>
[[nodiscard]] double distance(const Box<N>& b, const Point<N>& p) {
  return std::sqrt(squared_distance(b, p));
}

template <std::size_t N>
std::string to_string(const Box<N>& b) {
  std::ostringstream os;
  for (std::size_t i = 0; i < N; ++i) {
    if (i) os << " x ";
    os << '[' << b.lower[i] << ", " << b.upper[i] << ']';
  }
  return os.str();
}

}  // namespace symsynth::geometry

#endif  // SYMSYNTH_GEOMETRY_BOX_HPP
