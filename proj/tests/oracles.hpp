#ifndef SYMSYNTH_TESTS_ORACLES_HPP
#define SYMSYNTH_TESTS_ORACLES_HPP

// Independent reference computations shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "symsynth/cli/scenario.hpp"
#include "symsynth/symmetry/se2.hpp"

namespace oracles {

using symsynth::abstraction::CellClass;
using symsynth::abstraction::CellId;
using symsynth::abstraction::StateGrid;
using symsynth::geometry::Box;

// Cells holding a point of b under the half-open partition, found by testing
// every cell against every periodic image of b. Empty optional when b leaves a
// non-periodic bound.
inline std::optional<std::set<CellId>> cells_met(const StateGrid& g, const Box<3>& b) {
  for (std::size_t d = 0; d < 3; ++d) {
    if (!g.periodic()[d] && (b.lower[d] < g.bounds().lower[d] || b.upper[d] > g.bounds().upper[d])) {
      return std::nullopt;
    }
  }
  std::set<CellId> out;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Box<3> cb = g.cell_box(static_cast<CellId>(c));
    const auto idx = g.unflat(static_cast<CellId>(c));
    bool all = true;
    for (std::size_t d = 0; d < 3 && all; ++d) {
      const bool top = !g.periodic()[d] && idx[d] + 1 == g.counts()[d];
      const double span = g.bounds().upper[d] - g.bounds().lower[d];
      bool any = false;
      for (int k = -3; k <= 3 && !any; ++k) {
        if (!g.periodic()[d] && k != 0) continue;
        const double lo = b.lower[d] - k * span;
        const double hi = b.upper[d] - k * span;
        any = cb.lower[d] <= hi && (top ? lo <= cb.upper[d] : lo < cb.upper[d]);
      }
      all = any;
    }
    if (all) out.insert(static_cast<CellId>(c));
  }
  return out;
}

// Backward reachable set computed directly from the tubes: repeat until
// nothing changes, adding every normal cell with a control whose end box only
// meets R and whose windows meet no avoid cell.
inline std::set<CellId> brute_force_controlled(const symsynth::cli::Prepared& p) {
  const auto& g = p.scene.grid;
  const std::size_t nu = p.rd.controls();
  // Cells met by the end box and by the windows; invalid if a box leaves a
  // non-periodic bound.
  struct Hits {
    bool valid = true;
    std::set<CellId> end;
    std::set<CellId> windows;
  };
  std::vector<std::vector<Hits>> hits(g.size(), std::vector<Hits>(nu));
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!p.cls.is(static_cast<CellId>(c), CellClass::Normal)) continue;
    const Box<3> cb = g.cell_box(static_cast<CellId>(c));
    for (std::size_t a = 0; a < nu; ++a) {
      const auto& tube = p.rd.tube(0, a);
      Hits& h = hits[c][a];
      for (const auto& s : tube.segments()) {
        const auto m = cells_met(g, symsynth::symmetry::box_from_cell(s.box, cb));
        if (!m) {
          h.valid = false;
          break;
        }
        h.windows.insert(m->begin(), m->end());
      }
      const auto e = cells_met(g, symsynth::symmetry::box_from_cell(tube.last(), cb));
      if (!e) h.valid = false;
      if (h.valid) h.end = *e;
    }
  }
  std::set<CellId> r;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (p.cls.is(static_cast<CellId>(c), CellClass::Reach)) r.insert(static_cast<CellId>(c));
  }
  std::set<CellId> controlled;
  for (bool grew = true; grew;) {
    grew = false;
    const std::set<CellId> before = r;
    for (std::size_t c = 0; c < g.size(); ++c) {
      if (!p.cls.is(static_cast<CellId>(c), CellClass::Normal) || before.count(static_cast<CellId>(c))) continue;
      for (std::size_t a = 0; a < nu; ++a) {
        const Hits& h = hits[c][a];
        if (!h.valid) continue;
        const bool lands = std::all_of(h.end.begin(), h.end.end(), [&](CellId n) { return before.count(n) > 0; });
        const bool clear = std::none_of(h.windows.begin(), h.windows.end(),
                                        [&](CellId n) { return p.cls.is(n, CellClass::Avoid); });
        if (lands && clear) {
          r.insert(static_cast<CellId>(c));
          controlled.insert(static_cast<CellId>(c));
          grew = true;
          break;
        }
      }
    }
  }
  return controlled;
}

}  // namespace oracles

#endif  // SYMSYNTH_TESTS_ORACLES_HPP
