#ifndef SYMSYNTH_VALIDATION_SIMULATE_HPP
#define SYMSYNTH_VALIDATION_SIMULATE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "symsynth/abstraction/classify.hpp"
#include "symsynth/geometry/interval.hpp"
#include "symsynth/reach/reach_dict.hpp"
#include "symsynth/synthesis/report.hpp"
#include "symsynth/synthesis/transition.hpp"

namespace symsynth::validation {

using geometry::Box;
using geometry::Vec3;

/// Planar kinematics with constant control and disturbance.
[[nodiscard]] inline Vec3 kinematics(const Vec3& x, const Vec3& nu, const Vec3& w) {
  const double c = std::cos(x[2]);
  const double s = std::sin(x[2]);
  return {c * nu[0] - s * nu[1] + w[0], s * nu[0] + c * nu[1] + w[1], nu[2] + w[2]};
}

/// One classical Runge-Kutta step.
[[nodiscard]] inline Vec3 rk4_step(const Vec3& x, const Vec3& nu, const Vec3& w, double h) {
  auto add = [](const Vec3& a, const Vec3& b, double f) {
    return Vec3{a[0] + f * b[0], a[1] + f * b[1], a[2] + f * b[2]};
  };
  const Vec3 k1 = kinematics(x, nu, w);
  const Vec3 k2 = kinematics(add(x, k1, 0.5 * h), nu, w);
  const Vec3 k3 = kinematics(add(x, k2, 0.5 * h), nu, w);
  const Vec3 k4 = kinematics(add(x, k3, h), nu, w);
  Vec3 y{};
  for (std::size_t i = 0; i < 3; ++i) y[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return y;
}

/// State after time t from x0 under constant control and disturbance.
[[nodiscard]] inline Vec3 integrate(Vec3 x, const Vec3& nu, const Vec3& w, double t,
                                    std::size_t steps) {
  const double h = t / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) x = rk4_step(x, nu, w, h);
  return x;
}

/// Disturbance values, one per integration step.
class DisturbanceSampler {
 public:
  enum class Mode { Uniform, BangBang };

  DisturbanceSampler(const Box<3>& w, std::uint64_t seed, Mode mode = Mode::Uniform)
      : box_(w), rng_(seed), mode_(mode) {}

  Vec3 next() {
    Vec3 v{};
    for (std::size_t i = 0; i < 3; ++i) {
      if (mode_ == Mode::BangBang) {
        v[i] = std::bernoulli_distribution(0.5)(rng_) ? box_.upper[i] : box_.lower[i];
      } else {
        v[i] = std::uniform_real_distribution<double>(box_.lower[i], box_.upper[i])(rng_);
      }
    }
    return v;
  }

 private:
  Box<3> box_;
  std::mt19937_64 rng_;
  Mode mode_;
};

enum class Verdict { Reached, HitAvoid, ExitedX, Uncontrolled, Timeout };

[[nodiscard]] inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Reached: return "Reached";
    case Verdict::HitAvoid: return "HitAvoid";
    case Verdict::ExitedX: return "ExitedX";
    case Verdict::Uncontrolled: return "Uncontrolled";
    case Verdict::Timeout: return "Timeout";
  }
  return "?";
}

struct RolloutSample {
  double t = 0.0;
  Vec3 x{};
  std::int32_t control = synthesis::kNoControl;
};

struct Rollout {
  std::vector<RolloutSample> samples;
  std::vector<std::int32_t> controls;  // one per period
  Verdict verdict = Verdict::Timeout;
  std::optional<double> reach_time;
};

struct SimulationSetup {
  const abstraction::Scene* scene = nullptr;
  const abstraction::Classification* cls = nullptr;
  const reach::ReachDict* rd = nullptr;
  Box<3> disturbance;  // the concrete disturbance set W
  std::size_t steps_per_period = 300;
};

namespace detail {

/// Heading wrapped to [-pi, pi); periodic grid dimensions wrapped into the
/// state box.
[[nodiscard]] inline Vec3 wrapped(const abstraction::StateGrid& grid, Vec3 x) {
  x[2] = geometry::wrap_angle(x[2]);
  const Box<3>& b = grid.bounds();
  for (std::size_t d = 0; d < 3; ++d) {
    if (!grid.periodic()[d]) continue;
    const double span = b.upper[d] - b.lower[d];
    x[d] = b.lower[d] + std::fmod(x[d] - b.lower[d], span);
    if (x[d] < b.lower[d]) x[d] += span;
    if (x[d] >= b.upper[d]) x[d] = b.lower[d];
  }
  return x;
}

[[nodiscard]] inline bool outside(const abstraction::StateGrid& grid, const Vec3& x) {
  const Box<3>& b = grid.bounds();
  for (std::size_t d = 0; d < 3; ++d) {
    if (!grid.periodic()[d] && (x[d] < b.lower[d] || x[d] > b.upper[d])) return true;
  }
  return false;
}

[[nodiscard]] inline bool in_box_mod_heading(const Box<3>& b, const Vec3& x) {
  if (x[0] < b.lower[0] || x[0] > b.upper[0] || x[1] < b.lower[1] || x[1] > b.upper[1]) {
    return false;
  }
  return geometry::angular_contains(b[2], x[2]);
}

}  // namespace detail

/// Closed-loop rollout of the zero-order-hold controller: at each period
/// boundary the controller looks up the current cell and holds its control.
[[nodiscard]] inline Rollout simulate(const SimulationSetup& setup,
                                      const synthesis::Controller& controller, const Vec3& x0,
                                      std::uint64_t seed, std::size_t max_periods) {
  const auto& scene = *setup.scene;
  const auto& rd = *setup.rd;
  const double tau = rd.params().tau;
  const double h = tau / static_cast<double>(setup.steps_per_period);
  DisturbanceSampler sampler(setup.disturbance, seed);

  auto status = [&](const Vec3& x) -> std::optional<Verdict> {
    for (const auto& a : scene.avoid) {
      if (detail::in_box_mod_heading(a, x)) return Verdict::HitAvoid;
    }
    if (detail::outside(scene.grid, x)) return Verdict::ExitedX;
    if (detail::in_box_mod_heading(scene.reach, x)) return Verdict::Reached;
    return std::nullopt;
  };

  Rollout out;
  Vec3 x = detail::wrapped(scene.grid, x0);
  out.samples.push_back({0.0, x, synthesis::kNoControl});
  if (auto v = status(x)) {
    out.verdict = *v;
    if (*v == Verdict::Reached) out.reach_time = 0.0;
    return out;
  }
  const auto start = scene.grid.cell_of(x);
  if (!start || !controller.at(*start)) {
    throw std::invalid_argument("rollout must start in a controlled cell");
  }
  double t = 0.0;
  for (std::size_t p = 0; p < max_periods; ++p) {
    const auto cell = scene.grid.cell_of(x);
    if (!cell) {
      out.verdict = Verdict::ExitedX;
      return out;
    }
    const auto a = controller.at(*cell);
    if (!a) {
      out.verdict = Verdict::Uncontrolled;
      return out;
    }
    out.controls.push_back(static_cast<std::int32_t>(*a));
    const Vec3 nu = rd.control_value(*a);
    for (std::size_t k = 0; k < setup.steps_per_period; ++k) {
      x = rk4_step(x, nu, sampler.next(), h);
      t = tau * static_cast<double>(p) + h * static_cast<double>(k + 1);
      x = detail::wrapped(scene.grid, x);
      out.samples.push_back({t, x, static_cast<std::int32_t>(*a)});
      if (auto v = status(x)) {
        out.verdict = *v;
        if (*v == Verdict::Reached) out.reach_time = t;
        return out;
      }
    }
  }
  out.verdict = Verdict::Timeout;
  return out;
}

inline void write_rollout_csv(const std::string& path, const Rollout& r) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t,N,E,theta,control\n";
  out.precision(10);
  for (const auto& s : r.samples) {
    out << s.t << ',' << s.x[0] << ',' << s.x[1] << ',' << s.x[2] << ',' << s.control << '\n';
  }
}

struct ContainmentReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::vector<std::string> details;  // first few violations
};

/// Draws (cell, control, start state, disturbance signal) at random, integrates
/// with RK4 and checks every step against the transformed tube's window boxes
/// and the final state against its end box.
[[nodiscard]] inline ContainmentReport check_tube_containment(
    const synthesis::TransitionOracle& oracle, const reach::ReachDict& rd,
    const Box<3>& disturbance, std::size_t samples, std::uint64_t seed,
    DisturbanceSampler::Mode mode, std::size_t steps = 300, double tol = 1e-9) {
  ContainmentReport rep;
  std::mt19937_64 rng(seed);
  const auto& grid = oracle.grid();
  std::uniform_int_distribution<std::size_t> pick_cell(0, grid.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_control(0, oracle.controls() - 1);
  const double tau = rd.params().tau;
  const std::size_t segs = oracle.segments();
  const double h = tau / static_cast<double>(steps);
  auto inside = [tol](const Box<3>& b, const Vec3& x) {
    for (std::size_t i = 0; i < 3; ++i) {
      if (x[i] < b.lower[i] - tol || x[i] > b.upper[i] + tol) return false;
    }
    return true;
  };
  for (std::size_t n = 0; n < samples; ++n) {
    const auto cell = static_cast<abstraction::CellId>(pick_cell(rng));
    const auto a = static_cast<abstraction::ControlId>(pick_control(rng));
    const Box<3> cb = grid.cell_box(cell);
    Vec3 x{};
    for (std::size_t i = 0; i < 3; ++i) {
      x[i] = std::uniform_real_distribution<double>(cb.lower[i], cb.upper[i])(rng);
    }
    std::vector<Box<3>> boxes;
    for (std::size_t s = 0; s <= segs; ++s) boxes.push_back(oracle.box(cell, a, s));
    const auto& tube = rd.tube(0, a);
    DisturbanceSampler sampler(disturbance, rng(), mode);
    const Vec3 nu = rd.control_value(a);
    bool ok = inside(boxes[0], x);
    for (std::size_t k = 0; k < steps && ok; ++k) {
      x = rk4_step(x, nu, sampler.next(), h);
      const double t = h * static_cast<double>(k + 1);
      const std::size_t s = tube.segment_at(t);
      bool in = inside(boxes[s], x);
      // A step landing on a window boundary belongs to both windows.
      if (!in && s + 1 < segs && std::abs(t - tube.segments()[s].t_end) <= 1e-12) {
        in = inside(boxes[s + 1], x);
      }
      ok = in;
    }
    ok = ok && inside(boxes[segs], x);
    ++rep.samples;
    if (!ok) {
      ++rep.violations;
      if (rep.details.size() < 10) {
        rep.details.push_back("cell " + std::to_string(cell) + " control " + std::to_string(a));
      }
    }
  }
  return rep;
}

}  // namespace symsynth::validation

#endif  // SYMSYNTH_VALIDATION_SIMULATE_HPP
