#ifndef SYMSYNTH_ABSTRACTION_CLASSIFY_HPP
#define SYMSYNTH_ABSTRACTION_CLASSIFY_HPP

#include <cstddef>
#include <vector>

#include "symsynth/abstraction/grid.hpp"
#include "symsynth/geometry/box.hpp"

namespace symsynth::abstraction {

enum class CellClass : unsigned char { Normal, Reach, Avoid };

/// Avoid if the closed cell meets any avoid box, else Reach if it lies inside
/// the reach box, else Normal.
[[nodiscard]] inline CellClass classify_cell(const StateGrid& grid, CellId cell, const Box<3>& reach,
                                             const std::vector<Box<3>>& avoid) {
  const Box<3> b = grid.cell_box(cell);
  for (const auto& a : avoid) {
    if (geometry::box_intersects(b, a)) return CellClass::Avoid;
  }
  return reach.contains(b) ? CellClass::Reach : CellClass::Normal;
}

/// Grid plus reach-avoid specification.
struct Scene {
  StateGrid grid;
  Box<3> reach;
  std::vector<Box<3>> avoid;
};

struct Classification {
  std::vector<CellClass> cls;
  std::size_t normal = 0;
  std::size_t reach = 0;
  std::size_t avoid = 0;

  [[nodiscard]] bool is(CellId c, CellClass k) const { return cls[c] == k; }
};

[[nodiscard]] inline Classification classify_all(const Scene& scene) {
  Classification out;
  out.cls.resize(scene.grid.size());
  for (std::size_t c = 0; c < scene.grid.size(); ++c) {
    const CellClass k = classify_cell(scene.grid, static_cast<CellId>(c), scene.reach, scene.avoid);
    out.cls[c] = k;
    switch (k) {
      case CellClass::Normal: ++out.normal; break;
      case CellClass::Reach: ++out.reach; break;
      case CellClass::Avoid: ++out.avoid; break;
    }
  }
  return out;
}

}  // namespace symsynth::abstraction

#endif  // SYMSYNTH_ABSTRACTION_CLASSIFY_HPP
