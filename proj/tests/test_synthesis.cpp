#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "symsynth/cli/scenario.hpp"
#include "symsynth/symmetry/se2.hpp"
#include "symsynth/synthesis/cache.hpp"
#include "symsynth/synthesis/report.hpp"
#include "symsynth/synthesis/synthesize.hpp"
#include "symsynth/synthesis/transition.hpp"

using namespace symsynth;
using abstraction::CellClass;
using abstraction::CellId;
using abstraction::ControlId;
using abstraction::StateGrid;
using abstraction::SymState;
using geometry::Box;
using synthesis::Cache;
using synthesis::ScoredControl;

namespace {

const cli::Prepared& toy() {
  static const cli::Prepared p = cli::prepare(cli::toy_scenario());
  return p;
}

const cli::Prepared& ship10() {
  static const cli::Prepared p = cli::prepare(cli::ship_scenario(10));
  return p;
}

}  // namespace

TEST(Cache, UpdateExamples) {
  const SymState s = SymState::pair(0, 7);
  Cache c = Cache::for_states({SymState::reach(), SymState::avoid(), s});
  EXPECT_TRUE(c.at(SymState::reach()).empty());
  EXPECT_TRUE(c.at(SymState::avoid()).empty());
  EXPECT_EQ(c.at(s), (Cache::List{{0, 7}}));
  c.update(s, 7);
  EXPECT_EQ(c.at(s), (Cache::List{{1, 7}}));
  c.update(s, 7);
  c.update(s, 3);
  EXPECT_EQ(c.at(s), (Cache::List{{2, 7}, {1, 3}}));
  c.update(s, 3);
  c.update(s, 3);
  EXPECT_EQ(c.at(s), (Cache::List{{3, 3}, {2, 7}}));
  EXPECT_THROW(c.update(SymState::pair(0, 8), 1), std::out_of_range);
}

TEST(Cache, TiesOrderedByControl) {
  const SymState s = SymState::pair(0, 5);
  Cache c = Cache::for_states({s});
  c.update(s, 9);
  c.update(s, 2);
  EXPECT_EQ(c.at(s), (Cache::List{{1, 2}, {1, 9}, {0, 5}}));
}

TEST(Strategy, Table) {
  EXPECT_FALSE(synthesis::strategy("0").use_cache);
  EXPECT_FALSE(synthesis::strategy("0").budget);
  EXPECT_EQ(synthesis::strategy("0.5").budget, 400U);
  EXPECT_EQ(synthesis::strategy("0.5").order, synthesis::ControlOrder::Random);
  for (const char* id : {"1", "2", "3", "4", "5", "6"}) {
    const auto s = synthesis::strategy(id);
    EXPECT_TRUE(s.use_cache) << id;
    EXPECT_EQ(s.neighborhood_pruning, id[0] >= '4') << id;
  }
  EXPECT_EQ(synthesis::strategy("2").budget, 400U);
  EXPECT_EQ(synthesis::strategy("5").budget, 400U);
  EXPECT_EQ(synthesis::strategy("3").order, synthesis::ControlOrder::Arbitrary);
  EXPECT_EQ(synthesis::strategy("6").abstraction_ordering(), abstraction::Ordering::Arbitrary);
  EXPECT_EQ(synthesis::strategy("4").abstraction_ordering(), abstraction::Ordering::Greedy);
  EXPECT_THROW((void)synthesis::strategy("7"), std::invalid_argument);
  EXPECT_THROW((void)synthesis::strategy(""), std::invalid_argument);
  EXPECT_EQ(synthesis::strategy("2").budget_for(100), 100U);
}

TEST(TransitionOracle, BoxesMatchTheSymmetryMap) {
  const auto& p = ship10();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> cell(0, p.scene.grid.size() - 1);
  std::uniform_int_distribution<std::size_t> control(0, p.rd.controls() - 1);
  for (int i = 0; i < 200; ++i) {
    const auto c = static_cast<CellId>(cell(rng));
    const auto a = static_cast<ControlId>(control(rng));
    const Box<3> cb = p.scene.grid.cell_box(c);
    const auto& tube = p.rd.tube(0, a);
    for (std::size_t s = 0; s < tube.segments().size(); ++s) {
      EXPECT_EQ(p.oracle->box(c, a, s), symmetry::box_from_cell(tube.segments()[s].box, cb));
    }
    EXPECT_EQ(p.oracle->box(c, a, p.oracle->segments()), symmetry::box_from_cell(tube.last(), cb));
  }
}

TEST(TransitionOracle, StandingStillNeverReachesAnything) {
  const auto& p = ship10();
  const auto in_r = synthesis::detail::mask_of(p.cls, CellClass::Reach);
  const auto avoid = synthesis::detail::mask_of(p.cls, CellClass::Avoid);
  const ControlId still = 364;
  ASSERT_LT(geometry::max_planar_radius(Box<3>::point(p.rd.control_value(still))), 1e-12);
  for (std::size_t c = 0; c < p.scene.grid.size(); ++c) {
    if (p.cls.is(static_cast<CellId>(c), CellClass::Normal)) {
      EXPECT_FALSE(p.oracle->ok(static_cast<CellId>(c), still, in_r, avoid)) << c;
    }
  }
}

TEST(TransitionOracle, ReachEverywhereAcceptsAnyInBoundsControl) {
  const auto& p = toy();
  const std::vector<char> all(p.scene.grid.size(), 1);
  const std::vector<char> none(p.scene.grid.size(), 0);
  std::size_t accepted = 0;
  for (std::size_t a = 0; a < p.rd.controls(); ++a) {
    const bool ok = p.oracle->ok(0, static_cast<ControlId>(a), all, none);
    bool in_bounds = true;
    for (std::size_t s = 0; s <= p.oracle->segments(); ++s) {
      const Box<3> b = p.oracle->box(0, static_cast<ControlId>(a), s);
      in_bounds = in_bounds && b.lower[2] >= -0.2 && b.upper[2] <= 0.2;
    }
    EXPECT_EQ(ok, in_bounds) << a;
    accepted += ok;
  }
  EXPECT_GT(accepted, 0U);
}

TEST(Neighborhood, OneRingForShortTravel) {
  const StateGrid g(Box<3>({0, 0, -geometry::kPi}, {5, 5, geometry::kPi}), {10, 10, 4},
                    {false, false, true});
  const abstraction::ControlGrid u(Box<3>({0.05, -0.01, -0.01}, {0.15, 0.01, 0.01}), {1, 1, 1});
  const auto rd = reach::build_reach_dict(u, g, {Box<3>::point({0, 0, 0})});
  const synthesis::Neighborhood hood(g, rd);
  EXPECT_NEAR(hood.travel()[0], 0.3, 1e-9);
  EXPECT_EQ(hood.steps()[0], 1U);
  EXPECT_EQ(hood.steps()[1], 1U);
  EXPECT_EQ(hood.steps()[2], 1U);
  EXPECT_EQ(hood.of({g.flat({5, 5, 1})}).size(), 27U);
  // Corner cell: clipped in north and east, wraps in heading.
  EXPECT_EQ(hood.of({g.flat({0, 0, 0})}).size(), 12U);
  EXPECT_TRUE(hood.of({}).empty());
}

TEST(Neighborhood, CoversEveryPredecessor) {
  for (const cli::Prepared* p : {&toy(), &ship10()}) {
    const synthesis::Neighborhood hood(p->scene.grid, p->rd);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::size_t> cell(0, p->scene.grid.size() - 1);
    std::uniform_int_distribution<std::size_t> control(0, p->rd.controls() - 1);
    for (int i = 0; i < 300; ++i) {
      const auto c = static_cast<CellId>(cell(rng));
      const auto a = static_cast<ControlId>(control(rng));
      for (std::size_t s = 0; s <= p->oracle->segments(); ++s) {
        (void)p->scene.grid.visit_cells(p->oracle->box(c, a, s), [&](CellId n) {
          const auto near = hood.of({n});
          EXPECT_TRUE(std::binary_search(near.begin(), near.end(), c)) << c << " -> " << n;
          return true;
        });
      }
    }
  }
}

TEST(Toy, MatchesBruteForceFixedPoint) {
  const auto& p = toy();
  const auto expected = oracles::brute_force_controlled(p);
  EXPECT_FALSE(expected.empty());
  for (const auto& id : synthesis::all_strategy_ids()) {
    const auto run = cli::run_strategy(p, id, 11);
    const auto got = run.result.controlled_cells();
    const std::set<CellId> got_set(got.begin(), got.end());
    if (cli::is_exhaustive(id)) {
      EXPECT_EQ(got_set, expected) << "strategy " << id;
    } else {
      EXPECT_TRUE(std::includes(expected.begin(), expected.end(), got_set.begin(), got_set.end()))
          << "strategy " << id;
    }
  }
}

TEST(Toy, StrategiesAgree) {
  const auto cmp = cli::compare_strategies(toy(), synthesis::all_strategy_ids(), 5);
  EXPECT_TRUE(cmp.equivalent);
  for (const auto& m : cmp.messages) ADD_FAILURE() << m;
  EXPECT_EQ(cmp.runs.size(), 8U);
}

TEST(Toy, AssignmentsReplay) {
  const auto& p = toy();
  for (const auto& id : synthesis::all_strategy_ids()) {
    const auto run = cli::run_strategy(p, id, 2);
    EXPECT_FALSE(synthesis::replay_assignments(*p.oracle, p.cls, run.result)) << id;
    for (CellId c : run.result.order) {
      EXPECT_TRUE(p.cls.is(c, CellClass::Normal));
      EXPECT_GE(run.result.controller[c], 0);
      EXPECT_GE(run.result.pass[c], 1U);
    }
  }
}

TEST(Toy, ReplayCatchesABadAssignment) {
  const auto& p = toy();
  auto run = cli::run_strategy(p, "0", 0);
  ASSERT_FALSE(run.result.order.empty());
  std::reverse(run.result.order.begin(), run.result.order.end());
  // A cell added in pass k > 1 failed against the R of pass k - 1, so it
  // cannot be replayed against the reach cells alone.
  bool depends = false;
  for (CellId c : run.result.order) depends = depends || run.result.pass[c] > 1;
  if (depends) {
    EXPECT_TRUE(synthesis::replay_assignments(*p.oracle, p.cls, run.result));
  }
}

TEST(Toy, BudgetStrategiesAreReproducible) {
  const auto& p = toy();
  for (const char* id : {"0.5", "2", "5"}) {
    const auto a = cli::run_strategy(p, id, 99);
    const auto b = cli::run_strategy(p, id, 99);
    EXPECT_EQ(a.result.controller, b.result.controller) << id;
  }
}

TEST(Toy, CacheInvariants) {
  const auto& p = toy();
  for (const char* id : {"1", "2", "3", "4", "5", "6"}) {
    const auto run = cli::run_strategy(p, id, 1);
    ASSERT_TRUE(run.result.cache);
    const auto pre = run.sym->preimages();
    for (const auto& [s, list] : run.result.cache->entries()) {
      if (!s.is_pair()) {
        EXPECT_TRUE(list.empty());
        continue;
      }
      std::set<ControlId> seen;
      std::size_t total = 0;
      for (std::size_t i = 0; i < list.size(); ++i) {
        EXPECT_TRUE(seen.insert(list[i].control).second);
        total += list[i].score;
        if (i > 0) {
          const auto& x = list[i - 1];
          const auto& y = list[i];
          EXPECT_TRUE(x.score > y.score || (x.score == y.score && x.control < y.control));
        }
      }
      EXPECT_TRUE(seen.count(s.control));
      EXPECT_LE(total, pre.at(s).size());
    }
    // Scores add up to the controlled cells.
    std::size_t scored = 0;
    for (const auto& [s, list] : run.result.cache->entries()) {
      for (const auto& e : list) scored += e.score;
    }
    EXPECT_EQ(scored, run.result.controlled()) << id;
  }
}

TEST(Toy, WalledTargetGivesNothing) {
  auto s = cli::toy_scenario();
  s.avoid_boxes = {Box<3>({2.4, 0.0, -0.2}, {2.6, 5.0, 0.2})};
  const auto p = cli::prepare(s);
  for (const auto& id : synthesis::all_strategy_ids()) {
    const auto run = cli::run_strategy(p, id, 0);
    EXPECT_EQ(run.result.controlled(), 0U) << id;
    EXPECT_EQ(run.result.passes, 1U) << id;
  }
}

TEST(Toy, EverythingIsTarget) {
  auto s = cli::toy_scenario();
  s.reach_box = s.state_box;
  s.avoid_boxes.clear();
  const auto p = cli::prepare(s);
  EXPECT_EQ(p.cls.normal, 0U);
  for (const auto& id : synthesis::all_strategy_ids()) {
    const auto run = cli::run_strategy(p, id, 0);
    EXPECT_EQ(run.result.controlled(), 0U) << id;
    EXPECT_EQ(run.result.passes, 0U) << id;
    EXPECT_EQ(run.metrics.path_max, 0U);
  }
}

TEST(Corridor, OneCacheEntryServesEveryCell) {
  const auto p = cli::prepare(cli::corridor_scenario());
  ASSERT_EQ(p.cls.normal, 18U);
  for (const char* id : {"1", "4"}) {
    const auto run = cli::run_strategy(p, id, 0);
    EXPECT_EQ(run.result.controlled(), 18U);
    ASSERT_EQ(run.sym->pair_count(), 1U);
    const SymState s = *std::find_if(run.sym->states.begin(), run.sym->states.end(),
                                     [](const SymState& x) { return x.is_pair(); });
    const auto& list = run.result.cache->at(s);
    ASSERT_EQ(list.size(), 1U);
    EXPECT_EQ(list[0].score, 18U);
    EXPECT_EQ(list[0].score, run.sym->preimages().at(s).size());
  }
}

TEST(Metrics, PathLengthsBoundedByPass) {
  // Under the baseline every cell's end box lands in cells of earlier passes.
  for (const auto& s : {cli::toy_scenario(), cli::corridor_scenario()}) {
    const auto p = cli::prepare(s);
    const auto run = cli::run_strategy(p, "0", 0);
    const auto len = synthesis::path_lengths(*p.oracle, run.result);
    for (CellId c : run.result.order) {
      EXPECT_GE(len[c], 1U);
      EXPECT_LE(len[c], run.result.pass[c]);
    }
    EXPECT_EQ(run.metrics.path_max, *std::max_element(len.begin(), len.end()));
  }
}

TEST(Toy, FinerGridKeepsStrategiesEquivalent) {
  auto s = cli::toy_scenario();
  s.grid_counts = {10, 10, 10};
  const auto p = cli::prepare(s);
  const auto base = cli::run_strategy(p, "0", 0).result.controlled_cells();
  EXPECT_FALSE(base.empty());
  for (const char* id : {"1", "4"}) {
    EXPECT_EQ(cli::run_strategy(p, id, 0).result.controlled_cells(), base) << id;
  }
}
