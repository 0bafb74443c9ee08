#ifndef SYMSYNTH_REACH_REACH_DICT_HPP
#define SYMSYNTH_REACH_REACH_DICT_HPP

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "symsynth/abstraction/grid.hpp"
#include "symsynth/reach/tube.hpp"

namespace symsynth::reach {

using abstraction::ControlGrid;
using abstraction::StateGrid;

inline constexpr int kReachDictVersion = 1;

struct ReachDictParams {
  Box<3> disturbance;  // disturbance box seen from the cross-section
  double tau = 3.0;
  std::size_t segments = 4;
  std::size_t steps = 512;

  friend bool operator==(const ReachDictParams&, const ReachDictParams&) = default;
};

/// Tubes from the cross-section (the origin) for every control symbol, in
/// relative coordinates. The ship has a single cross-section cell, so the
/// cross-section index is always 0.
class ReachDict {
 public:
  ReachDict() = default;
  ReachDict(ControlGrid controls, std::uint64_t state_grid_hash, ReachDictParams params,
            std::vector<TimedTube> tubes)
      : controls_(std::move(controls)), state_hash_(state_grid_hash), params_(params),
        tubes_(std::move(tubes)) {
    if (tubes_.size() != controls_.size()) throw ReachError("reach dict: one tube per control");
  }

  [[nodiscard]] std::size_t cross_sections() const { return 1; }
  [[nodiscard]] std::size_t controls() const { return tubes_.size(); }
  [[nodiscard]] const ControlGrid& control_grid() const { return controls_; }
  [[nodiscard]] const ReachDictParams& params() const { return params_; }
  [[nodiscard]] std::uint64_t state_grid_hash() const { return state_hash_; }

  [[nodiscard]] const TimedTube& tube(std::size_t j, std::size_t a) const {
    if (j != 0) throw ReachError("reach dict: cross-section index out of range");
    return tubes_.at(a);
  }

  [[nodiscard]] Vec3 control_value(std::size_t a) const {
    return controls_.center_of(static_cast<abstraction::CellId>(a));
  }

  friend bool operator==(const ReachDict&, const ReachDict&) = default;

 private:
  ControlGrid controls_;
  std::uint64_t state_hash_ = 0;
  ReachDictParams params_;
  std::vector<TimedTube> tubes_;
};

/// One tube per control-cell center, each from the exact origin.
[[nodiscard]] inline ReachDict build_reach_dict(const ControlGrid& controls,
                                               const StateGrid& states,
                                               const ReachDictParams& params) {
  std::vector<TimedTube> tubes;
  tubes.reserve(controls.size());
  const Box<3> origin = Box<3>::point({0.0, 0.0, 0.0});
  for (std::size_t a = 0; a < controls.size(); ++a) {
    ShipModel m{controls.center_of(static_cast<abstraction::CellId>(a)), params.disturbance,
                params.tau, params.segments, params.steps};
    try {
      tubes.push_back(compute_tube(m, origin));
    } catch (const ReachError& e) {
      throw ReachError("reach dict: control " + std::to_string(a) + ": " + e.what());
    }
  }
  return ReachDict(controls, states.hash(), params, std::move(tubes));
}

namespace detail {

inline nlohmann::json box_json(const Box<3>& b) {
  return nlohmann::json::array({nlohmann::json(b.lower), nlohmann::json(b.upper)});
}

inline Box<3> box_from_json(const nlohmann::json& j) {
  return Box<3>(j.at(0).get<Vec3>(), j.at(1).get<Vec3>());
}

inline nlohmann::json grid_json(const ControlGrid& g) {
  return {{"bounds", box_json(g.bounds())}, {"counts", g.counts()}, {"periodic", g.periodic()}};
}

inline ControlGrid grid_from_json(const nlohmann::json& j) {
  return ControlGrid(box_from_json(j.at("bounds")), j.at("counts").get<ControlGrid::Index>(),
                     j.at("periodic").get<std::array<bool, 3>>());
}

}  // namespace detail

[[nodiscard]] inline nlohmann::json to_json(const ReachDict& rd) {
  nlohmann::json tubes = nlohmann::json::array();
  for (std::size_t a = 0; a < rd.controls(); ++a) {
    const TimedTube& t = rd.tube(0, a);
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : t.segments()) {
      segs.push_back({{"t", {s.t_start, s.t_end}}, {"box", detail::box_json(s.box)}});
    }
    tubes.push_back({{"j", 0}, {"a", a}, {"segments", segs}, {"end", detail::box_json(t.last())}});
  }
  const auto& p = rd.params();
  return {{"format", "symsynth-reachdict"},
          {"version", kReachDictVersion},
          {"state_grid_hash", rd.state_grid_hash()},
          {"control_grid_hash", rd.control_grid().hash()},
          {"control_grid", detail::grid_json(rd.control_grid())},
          {"tau", p.tau},
          {"segments", p.segments},
          {"steps", p.steps},
          {"disturbance", detail::box_json(p.disturbance)},
          {"tubes", tubes}};
}

[[nodiscard]] inline ReachDict reach_dict_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "symsynth-reachdict") throw ReachError("not a reach dict file");
  if (j.at("version").get<int>() != kReachDictVersion) {
    throw ReachError("unsupported reach dict version");
  }
  ReachDictParams p{detail::box_from_json(j.at("disturbance")), j.at("tau").get<double>(),
                    j.at("segments").get<std::size_t>(), j.at("steps").get<std::size_t>()};
  ControlGrid controls = detail::grid_from_json(j.at("control_grid"));
  if (controls.hash() != j.at("control_grid_hash").get<std::uint64_t>()) {
    throw ReachError("reach dict: control grid hash mismatch");
  }
  std::vector<TimedTube> tubes(controls.size());
  for (const auto& t : j.at("tubes")) {
    const auto a = t.at("a").get<std::size_t>();
    if (a >= tubes.size()) throw ReachError("reach dict: control index out of range");
    std::vector<TubeSegment> segs;
    for (const auto& s : t.at("segments")) {
      segs.push_back({s.at("t").at(0).get<double>(), s.at("t").at(1).get<double>(),
                      detail::box_from_json(s.at("box"))});
    }
    tubes[a] = TimedTube(std::move(segs), detail::box_from_json(t.at("end")));
  }
  return ReachDict(std::move(controls), j.at("state_grid_hash").get<std::uint64_t>(), p,
                   std::move(tubes));
}

inline void save_reach_dict(const ReachDict& rd, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ReachError("cannot write " + path);
  out << to_json(rd).dump();
}

[[nodiscard]] inline ReachDict load_reach_dict(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ReachError("cannot read " + path);
  return reach_dict_from_json(nlohmann::json::parse(in));
}

}  // namespace symsynth::reach

#endif  // SYMSYNTH_REACH_REACH_DICT_HPP
