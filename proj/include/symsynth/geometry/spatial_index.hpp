#ifndef SYMSYNTH_GEOMETRY_SPATIAL_INDEX_HPP
#define SYMSYNTH_GEOMETRY_SPATIAL_INDEX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "symsynth/geometry/box.hpp"

namespace symsynth::geometry {

/// Static R-tree over boxes, bulk loaded with Sort-Tile-Recursive packing.
///
/// k-nearest queries run best-first on the Euclidean point-to-box distance.
/// Results come out in ascending (distance, key) order: ties always resolve to
/// the smaller key, so queries are deterministic.
template <std::size_t N, class Key = std::uint32_t>
class SpatialIndex {
 public:
  struct Entry {
    Box<N> box;
    Key key;
  };

  explicit SpatialIndex(std::vector<Entry> entries, std::size_t fanout = 8)
      : entries_(std::move(entries)), fanout_(std::max<std::size_t>(fanout, 2)) {
    build();
  }

  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }

  /// Keys of the k entries closest to `query`. Throws if the index is empty or
  /// k is zero; k larger than the entry count returns every key.
  [[nodiscard]] std::vector<Key> knn(const Point<N>& query, std::size_t k) const {
    if (entries_.empty()) throw std::invalid_argument("knn on an empty spatial index");
    if (k == 0) throw std::invalid_argument("knn needs k >= 1");
    k = std::min(k, entries_.size());

    // (distance, kind, key-or-node). Nodes (kind 0) sort before entries at the
    // same distance so that every tied entry is queued before any is emitted.
    using Item = std::tuple<double, int, Key, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(squared_distance(nodes_[root_].box, query), 0, Key{}, root_);
    std::vector<Key> out;
    out.reserve(k);
    while (!heap.empty() && out.size() < k) {
      const auto [d, kind, key, idx] = heap.top();
      heap.pop();
      if (kind == 1) {
        out.push_back(key);
        continue;
      }
      const Node& node = nodes_[idx];
      for (std::size_t c = node.first; c < node.first + node.count; ++c) {
        if (node.leaf) {
          const Entry& e = entries_[c];
          heap.emplace(squared_distance(e.box, query), 1, e.key, c);
        } else {
          heap.emplace(squared_distance(nodes_[c].box, query), 0, Key{}, c);
        }
      }
    }
    return out;
  }

 private:
  struct Node {
    Box<N> box;
    std::size_t first = 0;  // into entries_ (leaf) or nodes_ (inner)
    std::size_t count = 0;
    bool leaf = true;
  };

  template <class T, class BoxOf>
  void str_sort(std::vector<T>& items, std::size_t begin, std::size_t end, std::size_t axis,
                const BoxOf& box_of) {
    auto center = [&](const T& t) {
      const Box<N>& b = box_of(t);
      return b.lower[axis] + b.upper[axis];
    };
    std::sort(items.begin() + static_cast<std::ptrdiff_t>(begin),
              items.begin() + static_cast<std::ptrdiff_t>(end),
              [&](const T& a, const T& b) { return center(a) < center(b); });
    if (axis + 1 == N) return;
    const std::size_t count = end - begin;
    const double pages = std::ceil(static_cast<double>(count) / static_cast<double>(fanout_));
    const auto slabs = static_cast<std::size_t>(
        std::ceil(std::pow(pages, 1.0 / static_cast<double>(N - axis))));
    const std::size_t per_slab =
        fanout_ * static_cast<std::size_t>(std::ceil(pages / static_cast<double>(slabs)));
    for (std::size_t s = begin; s < end; s += per_slab) {
      str_sort(items, s, std::min(end, s + per_slab), axis + 1, box_of);
    }
  }

  void build() {
    nodes_.clear();
    if (entries_.empty()) return;
    str_sort(entries_, 0, entries_.size(), 0, [](const Entry& e) -> const Box<N>& { return e.box; });
    std::vector<std::size_t> level;
    for (std::size_t s = 0; s < entries_.size(); s += fanout_) {
      Node n;
      n.first = s;
      n.count = std::min(fanout_, entries_.size() - s);
      n.leaf = true;
      n.box = entries_[s].box;
      for (std::size_t i = s; i < s + n.count; ++i) n.box = hull(n.box, entries_[i].box);
      level.push_back(nodes_.size());
      nodes_.push_back(n);
    }
    while (level.size() > 1) {
      std::vector<Node> children;
      children.reserve(level.size());
      for (std::size_t idx : level) children.push_back(nodes_[idx]);
      str_sort(children, 0, children.size(), 0, [](const Node& n) -> const Box<N>& { return n.box; });
      // Children of one parent must be contiguous in nodes_.
      const std::size_t base = nodes_.size();
      nodes_.insert(nodes_.end(), children.begin(), children.end());
      std::vector<std::size_t> next;
      for (std::size_t s = 0; s < children.size(); s += fanout_) {
        Node n;
        n.first = base + s;
        n.count = std::min(fanout_, children.size() - s);
        n.leaf = false;
        n.box = children[s].box;
        for (std::size_t i = s; i < s + n.count; ++i) n.box = hull(n.box, children[i].box);
        next.push_back(nodes_.size());
        nodes_.push_back(n);
      }
      level = std::move(next);
    }
    root_ = level.front();
  }

  std::vector<Entry> entries_;
  std::vector<Node> nodes_;
  std::size_t fanout_;
  std::size_t root_ = 0;
};

}  // namespace symsynth::geometry

#endif  // SYMSYNTH_GEOMETRY_SPATIAL_INDEX_HPP
