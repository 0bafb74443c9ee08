#ifndef SYMSYNTH_SYNTHESIS_CACHE_HPP
#define SYMSYNTH_SYNTHESIS_CACHE_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "symsynth/abstraction/sym_abstraction.hpp"

namespace symsynth::synthesis {

using abstraction::ControlId;
using abstraction::SymState;

struct ScoredControl {
  std::size_t score = 0;
  ControlId control = 0;

  friend bool operator==(const ScoredControl&, const ScoredControl&) = default;
};

/// Per-state control lists ordered by score (descending, ties by control).
class Cache {
 public:
  using List = std::vector<ScoredControl>;

  /// Every pair state starts with its own control at score 0; the reach and
  /// avoid states start empty.
  static Cache for_states(const std::set<SymState>& states) {
    Cache c;
    for (const auto& s : states) {
      c.entries_[s] = s.is_pair() ? List{{0, s.control}} : List{};
    }
    return c;
  }

  [[nodiscard]] const List& at(const SymState& s) const {
    const auto it = entries_.find(s);
    if (it == entries_.end()) throw std::out_of_range("cache has no entry for this state");
    return it->second;
  }

  /// Increment a's score for s, inserting it at score 1 if absent.
  void update(const SymState& s, ControlId a) {
    const auto it = entries_.find(s);
    if (it == entries_.end()) throw std::out_of_range("cache has no entry for this state");
    List& list = it->second;
    auto hit = std::find_if(list.begin(), list.end(),
                            [a](const ScoredControl& e) { return e.control == a; });
    if (hit == list.end()) {
      list.push_back({1, a});
    } else {
      ++hit->score;
    }
    std::sort(list.begin(), list.end(), [](const ScoredControl& x, const ScoredControl& y) {
      return x.score != y.score ? x.score > y.score : x.control < y.control;
    });
  }

  [[nodiscard]] const std::map<SymState, List>& entries() const { return entries_; }

 private:
  std::map<SymState, List> entries_;
};

}  // namespace symsynth::synthesis

#endif  // SYMSYNTH_SYNTHESIS_CACHE_HPP
