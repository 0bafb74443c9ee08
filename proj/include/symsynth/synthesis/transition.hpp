#ifndef SYMSYNTH_SYNTHESIS_TRANSITION_HPP
#define SYMSYNTH_SYNTHESIS_TRANSITION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "symsynth/abstraction/grid.hpp"
#include "symsynth/geometry/rigid.hpp"
#include "symsynth/reach/reach_dict.hpp"
#include "symsynth/symmetry/se2.hpp"

namespace symsynth::synthesis {

using abstraction::CellId;
using abstraction::CellVisit;
using abstraction::ControlId;
using abstraction::StateGrid;
using geometry::Box;

/// Grid transitions obtained by moving reach-dict tubes to each cell.
///
/// The rotated tube depends only on a cell's heading band, so the rotation is
/// done once per (heading index, control) and cells add their planar extent.
/// Produces exactly the boxes of symmetry::box_from_cell.
class TransitionOracle {
 public:
  TransitionOracle(const StateGrid& grid, const reach::ReachDict& rd) : grid_(grid) {
    const std::size_t bands = grid.counts()[2];
    controls_ = rd.controls();
    segments_ = rd.tube(0, 0).segments().size();
    rotated_.resize(bands * controls_ * (segments_ + 1));
    for (std::size_t t = 0; t < bands; ++t) {
      const Box<3> band = grid.cell_box(grid.flat({0, 0, t}));
      for (std::size_t a = 0; a < controls_; ++a) {
        const auto& tube = rd.tube(0, a);
        if (tube.segments().size() != segments_) {
          throw reach::ReachError("reach dict tubes differ in segment count");
        }
        Box<3>* out = &rotated_[(t * controls_ + a) * (segments_ + 1)];
        for (std::size_t s = 0; s < segments_; ++s) {
          out[s] = geometry::rotate_box_outer(tube.segments()[s].box, band[2]);
        }
        out[segments_] = geometry::rotate_box_outer(tube.last(), band[2]);
      }
    }
  }

  [[nodiscard]] const StateGrid& grid() const { return grid_; }
  [[nodiscard]] std::size_t controls() const { return controls_; }
  [[nodiscard]] std::size_t segments() const { return segments_; }

  /// Window box s of the tube from `cell` under control a; s == segments()
  /// selects the end box.
  [[nodiscard]] Box<3> box(CellId cell, ControlId a, std::size_t s) const {
    const Box<3> cb = grid_.cell_box(cell);
    return place(cb, rotated(grid_.unflat(cell)[2], a)[s]);
  }

  /// The reach-avoid transition test: every cell met by the end box is in
  /// `in_r`, no cell met by a window box is an avoid cell, and no window box
  /// leaves the state box.
  [[nodiscard]] bool ok(CellId cell, ControlId a, const std::vector<char>& in_r,
                        const std::vector<char>& avoid) const {
    const Box<3> cb = grid_.cell_box(cell);
    const Box<3>* rot = rotated(grid_.unflat(cell)[2], a);
    const Box<3> end = place(cb, rot[segments_]);
    if (grid_.visit_cells(end, [&](CellId c) { return in_r[c] != 0; }) != CellVisit::Completed) {
      return false;
    }
    for (std::size_t s = 0; s < segments_; ++s) {
      const Box<3> seg = place(cb, rot[s]);
      if (grid_.visit_cells(seg, [&](CellId c) { return avoid[c] == 0; }) != CellVisit::Completed) {
        return false;
      }
    }
    return true;
  }

 private:
  [[nodiscard]] const Box<3>* rotated(std::size_t band, ControlId a) const {
    return &rotated_[(band * controls_ + a) * (segments_ + 1)];
  }

  [[nodiscard]] static Box<3> place(const Box<3>& cell, const Box<3>& rot) {
    Box<3> b;
    b.lower = {cell.lower[0] + rot.lower[0], cell.lower[1] + rot.lower[1], rot.lower[2]};
    b.upper = {cell.upper[0] + rot.upper[0], cell.upper[1] + rot.upper[1], rot.upper[2]};
    return b;
  }

  StateGrid grid_;
  std::size_t controls_ = 0;
  std::size_t segments_ = 0;
  std::vector<Box<3>> rotated_;
};

/// Cells whose tubes can reach a given cell in one transition, found from
/// per-dimension travel bounds.
class Neighborhood {
 public:
  Neighborhood(const StateGrid& grid, const reach::ReachDict& rd) : grid_(grid) {
    double radius = 0.0;
    double turn = 0.0;
    for (std::size_t a = 0; a < rd.controls(); ++a) {
      const auto& tube = rd.tube(0, a);
      auto take = [&](const Box<3>& b) {
        radius = std::max(radius, geometry::max_planar_radius(b));
        turn = std::max({turn, std::abs(b.lower[2]), std::abs(b.upper[2])});
      };
      for (const auto& s : tube.segments()) take(s.box);
      take(tube.last());
    }
    travel_ = {radius, radius, turn};
    for (std::size_t d = 0; d < 3; ++d) {
      const double w = grid.cell_size()[d];
      // Centre distance k*w may not exceed travel + w.
      reach_[d] = static_cast<std::size_t>(std::floor((travel_[d] + w) / w + 1e-9));
    }
  }

  [[nodiscard]] const geometry::Vec3& travel() const { return travel_; }
  [[nodiscard]] const std::array<std::size_t, 3>& steps() const { return reach_; }

  /// Union of the neighborhoods of `cells`, as a membership mask.
  void mark(const std::vector<CellId>& cells, std::vector<char>& mask) const {
    const auto& n = grid_.counts();
    const auto& per = grid_.periodic();
    for (CellId c : cells) {
      const auto idx = grid_.unflat(c);
      std::array<std::size_t, 3> lo{};
      std::array<std::size_t, 3> span{};
      for (std::size_t d = 0; d < 3; ++d) {
        const std::size_t r = reach_[d];
        if (per[d]) {
          if (2 * r + 1 >= n[d]) {
            lo[d] = 0;
            span[d] = n[d];
          } else {
            lo[d] = (idx[d] + n[d] - r % n[d]) % n[d];
            span[d] = 2 * r + 1;
          }
        } else {
          lo[d] = idx[d] >= r ? idx[d] - r : 0;
          span[d] = std::min(n[d] - 1, idx[d] + r) - lo[d] + 1;
        }
      }
      for (std::size_t k = 0; k < span[2]; ++k) {
        const std::size_t i2 = (lo[2] + k) % n[2];
        for (std::size_t j = 0; j < span[1]; ++j) {
          const std::size_t i1 = (lo[1] + j) % n[1];
          for (std::size_t i = 0; i < span[0]; ++i) {
            mask[grid_.flat({(lo[0] + i) % n[0], i1, i2})] = 1;
          }
        }
      }
    }
  }

  [[nodiscard]] std::vector<CellId> of(const std::vector<CellId>& cells) const {
    std::vector<char> mask(grid_.size(), 0);
    mark(cells, mask);
    std::vector<CellId> out;
    for (std::size_t c = 0; c < mask.size(); ++c) {
      if (mask[c]) out.push_back(static_cast<CellId>(c));
    }
    return out;
  }

 private:
  StateGrid grid_;
  geometry::Vec3 travel_{};
  std::array<std::size_t, 3> reach_{};
};

}  // namespace symsynth::synthesis

#endif  // SYMSYNTH_SYNTHESIS_TRANSITION_HPP
