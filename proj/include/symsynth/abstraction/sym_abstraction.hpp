#ifndef SYMSYNTH_ABSTRACTION_SYM_ABSTRACTION_HPP
#define SYMSYNTH_ABSTRACTION_SYM_ABSTRACTION_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "symsynth/abstraction/classify.hpp"
#include "symsynth/abstraction/relative.hpp"
#include "symsynth/geometry/spatial_index.hpp"
#include "symsynth/reach/reach_dict.hpp"

namespace symsynth::abstraction {

using ControlId = std::uint32_t;

/// State of the symmetry-based abstraction: the reach state, the avoid state,
/// or a (cross-section index, control) pair.
struct SymState {
  enum class Kind : unsigned char { Reach, Avoid, Pair };
  Kind kind = Kind::Avoid;
  std::uint32_t section = 0;
  ControlId control = 0;

  [[nodiscard]] static SymState reach() { return {Kind::Reach, 0, 0}; }
  [[nodiscard]] static SymState avoid() { return {Kind::Avoid, 0, 0}; }
  [[nodiscard]] static SymState pair(std::uint32_t j, ControlId a) { return {Kind::Pair, j, a}; }
  [[nodiscard]] bool is_pair() const { return kind == Kind::Pair; }

  friend auto operator<=>(const SymState&, const SymState&) = default;
};

enum class Ordering { Greedy, Arbitrary };

/// Retrieval sizes for nearest-tube queries: first, first*factor, ...
struct KnnSchedule {
  std::size_t first = 3;
  std::size_t factor = 5;
};

struct SymAbstraction {
  std::set<SymState> states;   // always holds the reach and avoid states
  std::vector<SymState> r_gs;  // one entry per grid cell
  std::vector<char> condemned;  // mapped to avoid after exhausting M controls
  std::size_t cao = 0;

  [[nodiscard]] std::size_t pair_count() const { return states.size() - 2; }

  [[nodiscard]] std::map<SymState, std::vector<CellId>> preimages() const {
    std::map<SymState, std::vector<CellId>> out;
    for (std::size_t c = 0; c < r_gs.size(); ++c) out[r_gs[c]].push_back(static_cast<CellId>(c));
    return out;
  }
};

/// Spatial index over the end boxes of the tubes in one cross-section.
[[nodiscard]] inline geometry::SpatialIndex<3, ControlId> end_box_index(const reach::ReachDict& rd,
                                                                       std::size_t j = 0) {
  std::vector<geometry::SpatialIndex<3, ControlId>::Entry> entries;
  entries.reserve(rd.controls());
  for (std::size_t a = 0; a < rd.controls(); ++a) {
    entries.push_back({rd.tube(j, a).last(), static_cast<ControlId>(a)});
  }
  return geometry::SpatialIndex<3, ControlId>(std::move(entries));
}

/// True if some window box of the tube meets one of the relative avoid sets.
[[nodiscard]] inline bool tube_obstructed(const reach::TimedTube& tube,
                                          const std::vector<Polytope<3>>& rel_avoid) {
  for (const auto& seg : tube.segments()) {
    for (const auto& p : rel_avoid) {
      if (geometry::polytope_intersects_box(p, seg.box)) return true;
    }
  }
  return false;
}

/// Controls of `index` in order of increasing end-box distance to `target`,
/// fetched in growing batches; calls f(a) for each until f returns true.
/// Returns true if f accepted a control.
template <class F>
bool for_each_nearest(const geometry::SpatialIndex<3, ControlId>& index, const Vec3& target,
                      const KnnSchedule& schedule, std::vector<char>& visited, F&& f) {
  std::size_t k = std::max<std::size_t>(schedule.first, 1);
  for (;;) {
    const std::size_t want = std::min(k, index.size());
    for (ControlId a : index.knn(target, want)) {
      if (visited[a]) continue;
      visited[a] = 1;
      if (f(a)) return true;
    }
    if (want == index.size()) return false;
    k *= std::max<std::size_t>(schedule.factor, 2);
  }
}

/// Maps every cell to a symmetry-based state.
///
/// The reach and avoid tests use the grid classification, which is what the
/// relative tests reduce to when the cross-section is a single point. Other
/// cells get the first control (nearest end box to the relative target, or
/// index order) whose tube clears the relative avoid sets; a cell with M
/// obstructed controls is condemned to the avoid state.
[[nodiscard]] inline SymAbstraction build_sym_abstraction(const std::vector<RelState>& rels,
                                                          const Classification& cls,
                                                          const reach::ReachDict& rd,
                                                          std::size_t m, Ordering ordering,
                                                          const KnnSchedule& schedule = {}) {
  if (m == 0 || m > rd.controls()) throw std::invalid_argument("M must be in [1, |controls|]");
  if (rels.size() != cls.cls.size()) throw std::invalid_argument("one relative state per cell");
  SymAbstraction out;
  out.states = {SymState::reach(), SymState::avoid()};
  out.r_gs.assign(rels.size(), SymState::avoid());
  out.condemned.assign(rels.size(), 0);
  const auto index = end_box_index(rd);
  std::vector<char> visited(rd.controls());
  for (std::size_t c = 0; c < rels.size(); ++c) {
    if (cls.cls[c] == CellClass::Reach) {
      out.r_gs[c] = SymState::reach();
      continue;
    }
    if (cls.cls[c] == CellClass::Avoid) continue;
    const RelState& rel = rels[c];
    std::size_t obstructed = 0;
    bool found = false;
    ControlId chosen = 0;
    auto try_control = [&](ControlId a) {
      if (obstructed >= m) return true;
      if (tube_obstructed(rd.tube(0, a), rel.rel_avoid)) {
        ++obstructed;
        return obstructed >= m;
      }
      found = true;
      chosen = a;
      return true;
    };
    if (ordering == Ordering::Greedy) {
      std::fill(visited.begin(), visited.end(), 0);
      for_each_nearest(index, rel.target, schedule, visited, try_control);
    } else {
      for (std::size_t a = 0; a < rd.controls(); ++a) {
        if (try_control(static_cast<ControlId>(a))) break;
      }
    }
    if (found) {
      const SymState s = SymState::pair(0, chosen);
      out.states.insert(s);
      out.r_gs[c] = s;
    } else {
      out.condemned[c] = 1;
      ++out.cao;
    }
  }
  return out;
}

[[nodiscard]] inline nlohmann::json sym_state_json(const SymState& s) {
  switch (s.kind) {
    case SymState::Kind::Reach: return "reach";
    case SymState::Kind::Avoid: return "avoid";
    case SymState::Kind::Pair: break;
  }
  return nlohmann::json::array({s.section, s.control});
}

[[nodiscard]] inline SymState sym_state_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto v = j.get<std::string>();
    if (v == "reach") return SymState::reach();
    if (v == "avoid") return SymState::avoid();
    throw std::invalid_argument("unknown symmetry state " + v);
  }
  return SymState::pair(j.at(0).get<std::uint32_t>(), j.at(1).get<ControlId>());
}

[[nodiscard]] inline nlohmann::json to_json(const SymAbstraction& a, std::uint64_t grid_hash) {
  nlohmann::json map = nlohmann::json::array();
  for (const auto& s : a.r_gs) map.push_back(sym_state_json(s));
  std::vector<std::size_t> condemned;
  for (std::size_t c = 0; c < a.condemned.size(); ++c) {
    if (a.condemned[c]) condemned.push_back(c);
  }
  return {{"format", "symsynth-abstraction"}, {"version", 1},      {"grid_hash", grid_hash},
          {"n_sym", a.pair_count()},          {"n_cao", a.cao},    {"condemned", condemned},
          {"r_gs", map}};
}

[[nodiscard]] inline SymAbstraction sym_abstraction_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "symsynth-abstraction") {
    throw std::invalid_argument("not an abstraction file");
  }
  SymAbstraction a;
  a.states = {SymState::reach(), SymState::avoid()};
  for (const auto& s : j.at("r_gs")) {
    a.r_gs.push_back(sym_state_from_json(s));
    a.states.insert(a.r_gs.back());
  }
  a.condemned.assign(a.r_gs.size(), 0);
  for (const auto& c : j.at("condemned")) a.condemned.at(c.get<std::size_t>()) = 1;
  a.cao = j.at("n_cao").get<std::size_t>();
  return a;
}

}  // namespace symsynth::abstraction

#endif  // SYMSYNTH_ABSTRACTION_SYM_ABSTRACTION_HPP
