#ifndef SYMSYNTH_SYNTHESIS_STRATEGY_HPP
#define SYMSYNTH_SYNTHESIS_STRATEGY_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symsynth/abstraction/sym_abstraction.hpp"

namespace symsynth::synthesis {

enum class ControlOrder { Index, Random, Greedy, Arbitrary };

/// One row of the strategy table.
struct StrategyConfig {
  std::string id = "0";
  bool use_cache = false;                 // symmetry-guided synthesis instead of the baseline
  std::optional<std::size_t> budget;      // controls examined per cell and pass; empty = all
  bool neighborhood_pruning = false;
  ControlOrder order = ControlOrder::Index;
  std::size_t batch_start = 3;
  std::size_t batch_factor = 5;
  std::size_t random_tail = 75;

  [[nodiscard]] std::size_t budget_for(std::size_t controls) const {
    return budget ? std::min(*budget, controls) : controls;
  }

  /// Ordering used when building the abstraction for this strategy.
  [[nodiscard]] abstraction::Ordering abstraction_ordering() const {
    return order == ControlOrder::Arbitrary ? abstraction::Ordering::Arbitrary
                                            : abstraction::Ordering::Greedy;
  }
};

/// 0: baseline, index order. 0.5: baseline, 400 random controls per cell and
/// pass. 1/2/3: cache-guided over all cells left (all controls greedy / 400
/// greedy / all arbitrary). 4/5/6: the same with neighborhood pruning.
[[nodiscard]] inline StrategyConfig strategy(const std::string& id) {
  StrategyConfig s;
  s.id = id;
  if (id == "0") return s;
  if (id == "0.5") {
    s.budget = 400;
    s.order = ControlOrder::Random;
    return s;
  }
  s.use_cache = true;
  if (id == "1" || id == "4") {
    s.order = ControlOrder::Greedy;
  } else if (id == "2" || id == "5") {
    s.order = ControlOrder::Greedy;
    s.budget = 400;
  } else if (id == "3" || id == "6") {
    s.order = ControlOrder::Arbitrary;
  } else {
    throw std::invalid_argument("unknown strategy '" + id + "' (expected 0, 0.5 or 1-6)");
  }
  s.neighborhood_pruning = id == "4" || id == "5" || id == "6";
  return s;
}

[[nodiscard]] inline std::vector<std::string> all_strategy_ids() {
  return {"0", "0.5", "1", "2", "3", "4", "5", "6"};
}

}  // namespace symsynth::synthesis

#endif  // SYMSYNTH_SYNTHESIS_STRATEGY_HPP
