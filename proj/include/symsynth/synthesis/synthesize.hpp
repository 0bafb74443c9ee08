#ifndef SYMSYNTH_SYNTHESIS_SYNTHESIZE_HPP
#define SYMSYNTH_SYNTHESIS_SYNTHESIZE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "symsynth/abstraction/classify.hpp"
#include "symsynth/abstraction/relative.hpp"
#include "symsynth/abstraction/sym_abstraction.hpp"
#include "symsynth/synthesis/cache.hpp"
#include "symsynth/synthesis/strategy.hpp"
#include "symsynth/synthesis/transition.hpp"

namespace symsynth::synthesis {

using abstraction::CellClass;
using abstraction::Classification;

inline constexpr std::int32_t kNoControl = -1;

/// Result of a synthesis run.
struct SynthesisResult {
  std::vector<std::int32_t> controller;  // control per cell, kNoControl if none
  std::vector<char> in_r;                // final R (reach cells included)
  std::vector<std::uint32_t> pass;       // pass in which a cell entered R (0 for reach cells)
  std::vector<CellId> order;             // controlled cells in the order they were added
  std::optional<Cache> cache;
  std::size_t passes = 0;
  std::size_t checks = 0;       // transition tests performed
  std::size_t cell_visits = 0;  // (cell, pass) pairs examined
  double explored_frac = 0.0;   // mean of |E| / |Normal cells not yet in R| over passes

  [[nodiscard]] std::size_t controlled() const { return order.size(); }

  [[nodiscard]] std::vector<CellId> controlled_cells() const {
    std::vector<CellId> out = order;
    std::sort(out.begin(), out.end());
    return out;
  }
};

namespace detail {

inline std::vector<char> mask_of(const Classification& cls, CellClass k) {
  std::vector<char> m(cls.cls.size(), 0);
  for (std::size_t c = 0; c < m.size(); ++c) m[c] = cls.cls[c] == k ? 1 : 0;
  return m;
}

inline SynthesisResult start(const Classification& cls) {
  SynthesisResult r;
  r.controller.assign(cls.cls.size(), kNoControl);
  r.in_r = mask_of(cls, CellClass::Reach);
  r.pass.assign(cls.cls.size(), 0);
  return r;
}

/// Normal cells outside R, ascending.
inline std::vector<CellId> open_cells(const Classification& cls, const std::vector<char>& in_r) {
  std::vector<CellId> out;
  for (std::size_t c = 0; c < cls.cls.size(); ++c) {
    if (cls.cls[c] == CellClass::Normal && !in_r[c]) out.push_back(static_cast<CellId>(c));
  }
  return out;
}

/// k distinct controls drawn uniformly from those with pool[a] == 0.
inline std::vector<ControlId> sample_unvisited(const std::vector<char>& visited, std::size_t k,
                                               std::mt19937_64& rng) {
  std::vector<ControlId> pool;
  for (std::size_t a = 0; a < visited.size(); ++a) {
    if (!visited[a]) pool.push_back(static_cast<ControlId>(a));
  }
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace detail

/// Fixed point of R <- R u {s : some control's end box lies in R and its
/// windows avoid the avoid cells}, recomputed pass by pass from the R of the
/// previous pass. Strategy 0 tries controls in index order; strategy 0.5 tries
/// a fresh uniform sample of budget() distinct controls per cell and pass.
[[nodiscard]] inline SynthesisResult synth_baseline(const TransitionOracle& oracle,
                                                    const Classification& cls,
                                                    const StrategyConfig& cfg,
                                                    std::uint64_t seed = 0) {
  if (cfg.use_cache) throw std::invalid_argument("synth_baseline needs a baseline strategy");
  SynthesisResult r = detail::start(cls);
  const auto avoid = detail::mask_of(cls, CellClass::Avoid);
  const std::size_t nu = oracle.controls();
  const std::size_t budget = cfg.budget_for(nu);
  std::mt19937_64 rng(seed);
  std::vector<char> none(nu, 0);
  double exp_sum = 0.0;
  for (;;) {
    const auto open = detail::open_cells(cls, r.in_r);
    if (open.empty()) break;
    ++r.passes;
    exp_sum += 1.0;
    std::vector<std::pair<CellId, ControlId>> added;
    for (CellId c : open) {
      ++r.cell_visits;
      auto attempt = [&](ControlId a) {
        ++r.checks;
        if (!oracle.ok(c, a, r.in_r, avoid)) return false;
        added.emplace_back(c, a);
        return true;
      };
      if (cfg.order == ControlOrder::Random) {
        for (ControlId a : detail::sample_unvisited(none, budget, rng)) {
          if (attempt(a)) break;
        }
      } else {
        for (std::size_t a = 0; a < budget; ++a) {
          if (attempt(static_cast<ControlId>(a))) break;
        }
      }
    }
    for (const auto& [c, a] : added) {
      r.in_r[c] = 1;
      r.controller[c] = static_cast<std::int32_t>(a);
      r.pass[c] = static_cast<std::uint32_t>(r.passes);
      r.order.push_back(c);
    }
    if (added.empty()) break;
  }
  r.explored_frac = r.passes ? exp_sum / static_cast<double>(r.passes) : 0.0;
  return r;
}

/// Cache-guided synthesis. Cells are visited in ascending order and join R as
/// soon as a control works, so later cells of the same pass already see them.
/// Each cell first tries the controls cached for its symmetry state, best
/// score first, then fresh batches: nearest end boxes to the cell's relative
/// target in batches of batch_start, batch_start*batch_factor, ... and a final
/// uniform sample of random_tail controls (greedy), or all remaining controls
/// by index (arbitrary). With pruning, the next pass only visits the
/// neighborhood of the cells added in this one.
[[nodiscard]] inline SynthesisResult synth_symmetry(const TransitionOracle& oracle,
                                                    const Classification& cls,
                                                    const std::vector<abstraction::RelState>& rels,
                                                    const abstraction::SymAbstraction& sym,
                                                    const reach::ReachDict& rd,
                                                    const StrategyConfig& cfg,
                                                    std::uint64_t seed = 0) {
  if (!cfg.use_cache) throw std::invalid_argument("synth_symmetry needs a cache strategy");
  if (sym.r_gs.size() != cls.cls.size() || rels.size() != cls.cls.size()) {
    throw std::invalid_argument("abstraction does not match the grid");
  }
  SynthesisResult r = detail::start(cls);
  Cache cache = Cache::for_states(sym.states);
  const auto avoid = detail::mask_of(cls, CellClass::Avoid);
  const std::size_t nu = oracle.controls();
  const std::size_t budget = cfg.budget_for(nu);
  const std::size_t tail = std::min(cfg.random_tail, budget);
  const auto index = abstraction::end_box_index(rd);
  const Neighborhood hood(oracle.grid(), rd);
  std::mt19937_64 rng(seed);
  std::vector<char> visited(nu, 0);
  std::vector<ControlId> batch;

  std::vector<CellId> e = detail::open_cells(cls, r.in_r);
  std::size_t not_in_r = e.size();
  double exp_sum = 0.0;
  while (!e.empty()) {
    ++r.passes;
    exp_sum += static_cast<double>(e.size()) / static_cast<double>(not_in_r);
    std::vector<CellId> added;
    for (CellId c : e) {
      if (r.in_r[c]) continue;
      ++r.cell_visits;
      std::fill(visited.begin(), visited.end(), 0);
      std::size_t explored = 0;
      const SymState s = sym.r_gs[c];
      auto try_batch = [&](const std::vector<ControlId>& controls) {
        for (ControlId a : controls) {
          ++r.checks;
          if (oracle.ok(c, a, r.in_r, avoid)) {
            r.in_r[c] = 1;
            r.controller[c] = static_cast<std::int32_t>(a);
            r.pass[c] = static_cast<std::uint32_t>(r.passes);
            r.order.push_back(c);
            added.push_back(c);
            cache.update(s, a);
            return true;
          }
        }
        return false;
      };

      batch.clear();
      for (const auto& entry : cache.at(s)) {
        if (explored >= budget) break;
        batch.push_back(entry.control);
        visited[entry.control] = 1;
        ++explored;
      }
      if (try_batch(batch)) continue;

      if (cfg.order == ControlOrder::Arbitrary) {
        batch.clear();
        for (std::size_t a = 0; a < nu && explored < budget; ++a) {
          if (visited[a]) continue;
          visited[a] = 1;
          ++explored;
          batch.push_back(static_cast<ControlId>(a));
        }
        try_batch(batch);
        continue;
      }

      bool done = false;
      const std::size_t greedy_cap = budget - tail;
      std::size_t size = std::max<std::size_t>(cfg.batch_start, 1);
      while (!done && explored < greedy_cap) {
        const std::size_t want = std::min(size, greedy_cap - explored);
        batch.clear();
        const std::size_t k = std::min(nu, explored + want);
        for (ControlId a : index.knn(rels[c].target, k)) {
          if (batch.size() == want) break;
          if (visited[a]) continue;
          visited[a] = 1;
          batch.push_back(a);
        }
        explored += batch.size();
        if (batch.empty()) break;
        done = try_batch(batch);
        size *= std::max<std::size_t>(cfg.batch_factor, 1);
      }
      if (done || explored >= budget) continue;
      try_batch(detail::sample_unvisited(visited, std::min(tail, budget - explored), rng));
    }
    if (added.empty()) break;
    not_in_r -= added.size();
    if (cfg.neighborhood_pruning) {
      std::vector<char> mask(cls.cls.size(), 0);
      hood.mark(added, mask);
      e.clear();
      for (std::size_t c = 0; c < mask.size(); ++c) {
        if (mask[c] && !r.in_r[c] && cls.cls[c] == CellClass::Normal) {
          e.push_back(static_cast<CellId>(c));
        }
      }
    } else {
      e = detail::open_cells(cls, r.in_r);
    }
  }
  r.explored_frac = r.passes ? exp_sum / static_cast<double>(r.passes) : 0.0;
  r.cache = std::move(cache);
  return r;
}

/// Checks each assignment against the R it was made from (reach cells plus
/// every cell assigned earlier). Returns the first offending cell, if any.
[[nodiscard]] inline std::optional<CellId> replay_assignments(const TransitionOracle& oracle,
                                                              const Classification& cls,
                                                              const SynthesisResult& r) {
  auto in_r = detail::mask_of(cls, CellClass::Reach);
  const auto avoid = detail::mask_of(cls, CellClass::Avoid);
  for (CellId c : r.order) {
    const std::int32_t a = r.controller[c];
    if (a < 0 || !oracle.ok(c, static_cast<ControlId>(a), in_r, avoid)) return c;
    in_r[c] = 1;
  }
  return std::nullopt;
}

}  // namespace symsynth::synthesis

#endif  // SYMSYNTH_SYNTHESIS_SYNTHESIZE_HPP
