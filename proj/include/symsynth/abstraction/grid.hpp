#ifndef SYMSYNTH_ABSTRACTION_GRID_HPP
#define SYMSYNTH_ABSTRACTION_GRID_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "symsynth/geometry/box.hpp"
#include "symsynth/geometry/interval.hpp"

namespace symsynth::abstraction {

using geometry::Box;
using geometry::Point;

using CellId = std::uint32_t;

enum class CellVisit { Completed, Stopped, OutOfBounds };

/// Uniform partition of a box. Cell i along dimension d covers the half-open
/// range [lo + i*w, lo + (i+1)*w); the last cell of a non-periodic dimension
/// also owns the upper bound. Periodic dimensions wrap. Flat indices run with
/// dimension 0 fastest.
template <std::size_t N>
class Grid {
 public:
  using Index = std::array<std::size_t, N>;

  Grid() = default;

  Grid(const Box<N>& bounds, const Index& counts, const std::array<bool, N>& periodic = {})
      : bounds_(bounds), counts_(counts), periodic_(periodic) {
    std::size_t total = 1;
    for (std::size_t d = 0; d < N; ++d) {
      if (counts_[d] == 0) throw std::invalid_argument("grid: zero cell count in a dimension");
      if (!(bounds_.upper[d] > bounds_.lower[d])) {
        throw std::invalid_argument("grid: empty extent in a dimension");
      }
      width_[d] = (bounds_.upper[d] - bounds_.lower[d]) / static_cast<double>(counts_[d]);
      total *= counts_[d];
    }
    if (total > std::size_t{0xffffffffU}) throw std::invalid_argument("grid: too many cells");
    size_ = total;
  }

  [[nodiscard]] const Box<N>& bounds() const { return bounds_; }
  [[nodiscard]] const Index& counts() const { return counts_; }
  [[nodiscard]] const std::array<bool, N>& periodic() const { return periodic_; }
  [[nodiscard]] const Point<N>& cell_size() const { return width_; }
  [[nodiscard]] std::size_t size() const { return size_; }

  [[nodiscard]] CellId flat(const Index& idx) const {
    std::size_t f = 0;
    for (std::size_t d = N; d-- > 0;) f = f * counts_[d] + idx[d];
    return static_cast<CellId>(f);
  }

  [[nodiscard]] Index unflat(CellId c) const {
    Index idx{};
    std::size_t f = c;
    for (std::size_t d = 0; d < N; ++d) {
      idx[d] = f % counts_[d];
      f /= counts_[d];
    }
    return idx;
  }

  [[nodiscard]] double lower_edge(std::size_t d, std::size_t i) const {
    return bounds_.lower[d] + static_cast<double>(i) * width_[d];
  }

  [[nodiscard]] Box<N> cell_box(CellId c) const {
    const Index idx = unflat(c);
    Box<N> b;
    for (std::size_t d = 0; d < N; ++d) {
      b.lower[d] = lower_edge(d, idx[d]);
      b.upper[d] = idx[d] + 1 == counts_[d] ? bounds_.upper[d] : lower_edge(d, idx[d] + 1);
    }
    return b;
  }

  [[nodiscard]] Point<N> center_of(CellId c) const { return cell_box(c).center(); }

  /// Cell containing p, or nothing if p lies outside a non-periodic bound.
  [[nodiscard]] std::optional<CellId> cell_of(const Point<N>& p) const {
    Index idx{};
    for (std::size_t d = 0; d < N; ++d) {
      double v = p[d];
      if (periodic_[d]) {
        const double span = bounds_.upper[d] - bounds_.lower[d];
        v = bounds_.lower[d] + std::fmod(v - bounds_.lower[d], span);
        if (v < bounds_.lower[d]) v += span;
        if (v >= bounds_.upper[d]) v = bounds_.lower[d];
      } else if (v < bounds_.lower[d] || v > bounds_.upper[d]) {
        return std::nullopt;
      }
      idx[d] = index_along(d, v);
    }
    return flat(idx);
  }

  /// Calls f(cell) for every cell holding a point of the closed box b, with
  /// cells read as the half-open partition used by cell_of: a box whose lower
  /// face lies on an interior edge does not visit the cell below that edge.
  /// f returns false to stop early. Reports OutOfBounds without visiting anything if b sticks out
  /// of a non-periodic bound.
  template <class F>
  CellVisit visit_cells(const Box<N>& b, F&& f) const {
    std::array<std::size_t, N> first{};
    std::array<std::size_t, N> span{};
    for (std::size_t d = 0; d < N; ++d) {
      if (periodic_[d]) {
        const double lo = std::floor((b.lower[d] - bounds_.lower[d]) / width_[d]);
        const double hi = std::floor((b.upper[d] - bounds_.lower[d]) / width_[d]);
        const auto n = static_cast<double>(counts_[d]);
        if (hi - lo + 1.0 >= n) {
          first[d] = 0;
          span[d] = counts_[d];
        } else {
          double m = std::fmod(lo, n);
          if (m < 0.0) m += n;
          first[d] = static_cast<std::size_t>(m);
          span[d] = static_cast<std::size_t>(hi - lo) + 1;
        }
      } else {
        if (b.lower[d] < bounds_.lower[d] || b.upper[d] > bounds_.upper[d]) {
          return CellVisit::OutOfBounds;
        }
        first[d] = index_along(d, b.lower[d]);
        span[d] = index_along(d, b.upper[d]) - first[d] + 1;
      }
    }
    Index off{};
    for (;;) {
      Index idx{};
      for (std::size_t d = 0; d < N; ++d) idx[d] = (first[d] + off[d]) % counts_[d];
      if (!f(flat(idx))) return CellVisit::Stopped;
      std::size_t d = 0;
      while (d < N && ++off[d] == span[d]) off[d++] = 0;
      if (d == N) return CellVisit::Completed;
    }
  }

  /// FNV-1a over bounds, counts and periodicity.
  [[nodiscard]] std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* data, std::size_t len) {
      const auto* p = static_cast<const unsigned char*>(data);
      for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
      }
    };
    for (std::size_t d = 0; d < N; ++d) {
      mix(&bounds_.lower[d], sizeof(double));
      mix(&bounds_.upper[d], sizeof(double));
      const std::uint64_t c = counts_[d];
      mix(&c, sizeof c);
      const unsigned char p = periodic_[d] ? 1 : 0;
      mix(&p, 1);
    }
    return h;
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.bounds_ == b.bounds_ && a.counts_ == b.counts_ && a.periodic_ == b.periodic_;
  }

  [[nodiscard]] std::string describe() const {
    std::ostringstream os;
    for (std::size_t d = 0; d < N; ++d) os << (d ? "x" : "") << counts_[d];
    return os.str();
  }

 private:
  [[nodiscard]] std::size_t index_along(std::size_t d, double v) const {
    const double f = std::floor((v - bounds_.lower[d]) / width_[d]);
    if (f < 0.0) return 0;
    const auto i = static_cast<std::size_t>(f);
    return i >= counts_[d] ? counts_[d] - 1 : i;
  }

  Box<N> bounds_;
  Index counts_{};
  std::array<bool, N> periodic_{};
  Point<N> width_{};
  std::size_t size_ = 0;
};

using StateGrid = Grid<3>;
using ControlGrid = Grid<3>;

}  // namespace symsynth::abstraction

#endif  // SYMSYNTH_ABSTRACTION_GRID_HPP
