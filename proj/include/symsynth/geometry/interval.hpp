#ifndef SYMSYNTH_GEOMETRY_INTERVAL_HPP
#define SYMSYNTH_GEOMETRY_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace symsynth::geometry {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] constexpr double width() const { return hi - lo; }
  [[nodiscard]] constexpr double mid() const { return 0.5 * (lo + hi); }
  [[nodiscard]] constexpr bool contains(double x) const { return lo <= x && x <= hi; }
  [[nodiscard]] constexpr bool intersects(const Interval& o) const {
    return lo <= o.hi && o.lo <= hi;
  }

  friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

[[nodiscard]] constexpr Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

[[nodiscard]] constexpr Interval operator+(const Interval& a, const Interval& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

[[nodiscard]] constexpr Interval operator*(double s, const Interval& a) {
  return s >= 0.0 ? Interval{s * a.lo, s * a.hi} : Interval{s * a.hi, s * a.lo};
}

/// Widen each non-zero bound by two ulps. Exact zeros are left alone so that
/// degenerate computations (no motion, no disturbance) stay degenerate.
[[nodiscard]] inline Interval outward(Interval iv) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (iv.lo != 0.0) iv.lo = std::nextafter(std::nextafter(iv.lo, -inf), -inf);
  if (iv.hi != 0.0) iv.hi = std::nextafter(std::nextafter(iv.hi, inf), inf);
  return iv;
}

/// Wrap an angle to the half-open range [-pi, pi).
[[nodiscard]] inline double wrap_angle(double a) {
  double r = std::fmod(a + kPi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  r -= kPi;
  // fmod can land exactly on +pi after the shift because of rounding.
  if (r >= kPi) r -= kTwoPi;
  return r;
}

/// Exact range of cos over an interval.
[[nodiscard]] inline Interval interval_cos(const Interval& x) {
  if (x.width() >= kTwoPi) return {-1.0, 1.0};
  const double c0 = std::cos(x.lo);
  const double c1 = std::cos(x.hi);
  Interval r{std::min(c0, c1), std::max(c0, c1)};
  // Maxima at 2k*pi, minima at (2k+1)*pi.
  const double k_max = std::ceil(x.lo / kTwoPi);
  if (k_max * kTwoPi <= x.hi) r.hi = 1.0;
  const double k_min = std::ceil((x.lo - kPi) / kTwoPi);
  if (k_min * kTwoPi + kPi <= x.hi) r.lo = -1.0;
  return r;
}

/// Exact range of sin over an interval.
[[nodiscard]] inline Interval interval_sin(const Interval& x) {
  if (x.width() >= kTwoPi) return {-1.0, 1.0};
  const double s0 = std::sin(x.lo);
  const double s1 = std::sin(x.hi);
  Interval r{std::min(s0, s1), std::max(s0, s1)};
  // Maxima at pi/2 + 2k*pi, minima at -pi/2 + 2k*pi.
  const double k_max = std::ceil((x.lo - 0.5 * kPi) / kTwoPi);
  if (k_max * kTwoPi + 0.5 * kPi <= x.hi) r.hi = 1.0;
  const double k_min = std::ceil((x.lo + 0.5 * kPi) / kTwoPi);
  if (k_min * kTwoPi - 0.5 * kPi <= x.hi) r.lo = -1.0;
  return r;
}

/// Split an angular interval into pieces inside [-pi, pi]. Intervals of width
/// at least 2*pi collapse to the whole circle.
[[nodiscard]] inline std::vector<Interval> angular_pieces(const Interval& a) {
  if (a.width() >= kTwoPi) return {{-kPi, kPi}};
  const double lo = wrap_angle(a.lo);
  const double hi = lo + a.width();
  if (hi <= kPi) return {{lo, hi}};
  return {{lo, kPi}, {-kPi, hi - kTwoPi}};
}

/// True iff the angular intervals overlap modulo 2*pi.
[[nodiscard]] inline bool angular_intersects(const Interval& a, const Interval& b) {
  for (const auto& pa : angular_pieces(a)) {
    for (const auto& pb : angular_pieces(b)) {
      if (pa.intersects(pb)) return true;
    }
  }
  return false;
}

/// True iff some representative of angle x (mod 2*pi) lies in a.
[[nodiscard]] inline bool angular_contains(const Interval& a, double x) {
  if (a.width() >= kTwoPi) return true;
  const double shift = std::floor((x - a.lo) / kTwoPi);
  const double y = x - shift * kTwoPi;  // y in [a.lo, a.lo + 2pi)
  return y <= a.hi;
}

}  // namespace symsynth::geometry

#endif  // SYMSYNTH_GEOMETRY_INTERVAL_HPP
