#ifndef SYMSYNTH_REACH_TUBE_HPP
#define SYMSYNTH_REACH_TUBE_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "symsynth/geometry/box.hpp"
#include "symsynth/geometry/interval.hpp"

namespace symsynth::reach {

using geometry::Box;
using geometry::Interval;
using geometry::Vec3;

class ReachError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Planar kinematics eta' = R(theta) nu + w with nu = (surge, sway, yaw rate)
/// held constant and w ranging over a box.
struct ShipModel {
  Vec3 control{};
  Box<3> disturbance{};
  double tau = 3.0;
  std::size_t segments = 4;
  std::size_t steps = 512;  // total internal steps over [0, tau]

  /// Right-hand side for a fixed disturbance value.
  [[nodiscard]] Vec3 rhs(const Vec3& x, const Vec3& w) const {
    const double c = std::cos(x[2]);
    const double s = std::sin(x[2]);
    return {c * control[0] - s * control[1] + w[0], s * control[0] + c * control[1] + w[1],
            control[2] + w[2]};
  }

  void validate() const {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ReachError("tau must be positive and finite");
    if (segments == 0) throw ReachError("segment count must be at least 1");
    if (steps == 0 || steps % segments != 0) {
      throw ReachError("integration steps must be a positive multiple of the segment count");
    }
  }
};

struct TubeSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  Box<3> box;

  friend bool operator==(const TubeSegment&, const TubeSegment&) = default;
};

/// Over-approximation of the states visited on [0, tau]: one box per time
/// window plus a box for the states at exactly tau.
class TimedTube {
 public:
  TimedTube() = default;
  TimedTube(std::vector<TubeSegment> segments, const Box<3>& end)
      : segments_(std::move(segments)), end_(end) {
    if (segments_.empty()) throw ReachError("tube needs at least one segment");
    for (std::size_t i = 1; i < segments_.size(); ++i) {
      if (segments_[i].t_start != segments_[i - 1].t_end) {
        throw ReachError("tube segments must be contiguous");
      }
    }
  }

  [[nodiscard]] const std::vector<TubeSegment>& segments() const { return segments_; }

  [[nodiscard]] std::vector<Box<3>> full() const {
    std::vector<Box<3>> out;
    out.reserve(segments_.size());
    for (const auto& s : segments_) out.push_back(s.box);
    return out;
  }

  [[nodiscard]] const Box<3>& last() const { return end_; }

  [[nodiscard]] double tau() const { return segments_.empty() ? 0.0 : segments_.back().t_end; }

  /// Index of a segment whose window contains t.
  [[nodiscard]] std::size_t segment_at(double t) const {
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      if (t <= segments_[i].t_end) return i;
    }
    return segments_.size() - 1;
  }

  friend bool operator==(const TimedTube&, const TimedTube&) = default;

 private:
  std::vector<TubeSegment> segments_;
  Box<3> end_;
};

namespace detail {

[[nodiscard]] inline Interval heading_at(const Interval& theta0, const Interval& rate, double t) {
  return {theta0.lo + rate.lo * t, theta0.hi + rate.hi * t};
}

}  // namespace detail

/// Interval enclosure of every trajectory from x0 under the model.
///
/// The heading evolves independently of position, so it is bounded exactly by
/// a linear interval in t. Over each internal step the velocity is enclosed by
/// the interval extension of rho*(cos, sin)(theta + beta) plus the disturbance,
/// and the step's swept positions by P + [0, h] * V.
[[nodiscard]] inline TimedTube compute_tube(const ShipModel& model, const Box<3>& x0) {
  model.validate();
  const double surge = model.control[0];
  const double sway = model.control[1];
  const double rho = std::hypot(surge, sway);
  const double beta = std::atan2(sway, surge);
  const Interval rate{model.control[2] + model.disturbance.lower[2],
                      model.control[2] + model.disturbance.upper[2]};
  const Interval theta0 = x0[2];
  const Interval wn = model.disturbance[0];
  const Interval we = model.disturbance[1];

  const std::size_t per_segment = model.steps / model.segments;
  const double h = model.tau / static_cast<double>(model.steps);

  Interval pn = x0[0];
  Interval pe = x0[1];
  std::vector<TubeSegment> segments;
  segments.reserve(model.segments);
  for (std::size_t s = 0; s < model.segments; ++s) {
    Interval seg_n = pn;
    Interval seg_e = pe;
    const std::size_t first = s * per_segment;
    for (std::size_t k = first; k < first + per_segment; ++k) {
      const double t0 = static_cast<double>(k) * h;
      const double t1 = static_cast<double>(k + 1) * h;
      const Interval a = detail::heading_at(theta0, rate, t0);
      const Interval b = detail::heading_at(theta0, rate, t1);
      const Interval theta = hull(a, b);
      Interval vn = wn;
      Interval ve = we;
      if (rho != 0.0) {
        const Interval shifted{theta.lo + beta, theta.hi + beta};
        vn = outward(rho * geometry::interval_cos(shifted) + wn);
        ve = outward(rho * geometry::interval_sin(shifted) + we);
      }
      const Interval dn{std::min(0.0, h * vn.lo), std::max(0.0, h * vn.hi)};
      const Interval de{std::min(0.0, h * ve.lo), std::max(0.0, h * ve.hi)};
      seg_n = hull(seg_n, outward(pn + dn));
      seg_e = hull(seg_e, outward(pe + de));
      pn = outward(pn + h * vn);
      pe = outward(pe + h * ve);
    }
    const double ts = static_cast<double>(first) * h;
    const double te = s + 1 == model.segments ? model.tau : static_cast<double>(first + per_segment) * h;
    const Interval th = hull(detail::heading_at(theta0, rate, ts), detail::heading_at(theta0, rate, te));
    Box<3> box;
    box.set(0, seg_n);
    box.set(1, seg_e);
    box.set(2, outward(th));
    for (std::size_t d = 0; d < 3; ++d) {
      if (!std::isfinite(box.lower[d]) || !std::isfinite(box.upper[d])) {
        throw ReachError("non-finite tube bound in segment " + std::to_string(s));
      }
    }
    segments.push_back({ts, te, box});
  }
  Box<3> end;
  end.set(0, pn);
  end.set(1, pe);
  end.set(2, outward(detail::heading_at(theta0, rate, model.tau)));
  return TimedTube(std::move(segments), end);
}

}  // namespace symsynth::reach

#endif  // SYMSYNTH_REACH_TUBE_HPP
