#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "symsynth/geometry/box.hpp"
#include "symsynth/geometry/interval.hpp"
#include "symsynth/geometry/polytope.hpp"
#include "symsynth/geometry/rigid.hpp"
#include "symsynth/geometry/spatial_index.hpp"
#include "symsynth/symmetry/se2.hpp"

using namespace symsynth::geometry;

namespace {

Box<3> random_box(std::mt19937_64& rng, double span = 4.0, double max_width = 2.0) {
  std::uniform_real_distribution<double> pos(-span, span);
  std::uniform_real_distribution<double> wid(0.0, max_width);
  Vec3 lo{}, hi{};
  for (std::size_t i = 0; i < 3; ++i) {
    lo[i] = pos(rng);
    hi[i] = lo[i] + wid(rng);
  }
  return {lo, hi};
}

// Fourier-Motzkin feasibility of {a x <= b} in 3 variables. Returns the
// smallest slack b_k left once every variable is eliminated (feasible iff >= 0).
double fm_min_slack(std::vector<std::array<double, 4>> rows) {
  for (std::size_t v = 0; v < 3; ++v) {
    std::vector<std::array<double, 4>> pos, neg, next;
    for (const auto& r : rows) {
      if (r[v] > 1e-15) {
        pos.push_back(r);
      } else if (r[v] < -1e-15) {
        neg.push_back(r);
      } else {
        next.push_back(r);
      }
    }
    for (const auto& p : pos) {
      for (const auto& n : neg) {
        std::array<double, 4> c{};
        const double sp = -n[v];
        const double sn = p[v];
        for (std::size_t k = 0; k < 4; ++k) c[k] = sp * p[k] + sn * n[k];
        c[v] = 0.0;
        // Normalize to keep magnitudes comparable.
        double m = 0.0;
        for (std::size_t k = 0; k < 3; ++k) m = std::max(m, std::abs(c[k]));
        if (m > 0.0) {
          for (auto& x : c) x /= m;
        }
        next.push_back(c);
      }
    }
    rows = std::move(next);
  }
  double slack = HUGE_VAL;
  for (const auto& r : rows) slack = std::min(slack, r[3]);
  return slack;
}

Polytope<3> random_polytope(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 6);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> off(-3.0, 3.0);
  std::vector<Vec3> n;
  std::vector<double> o;
  const int m = count(rng);
  for (int k = 0; k < m; ++k) {
    n.push_back({g(rng), g(rng), g(rng)});
    o.push_back(off(rng));
  }
  return {n, o};
}

}  // namespace

TEST(Box, RejectsInvertedBounds) {
  EXPECT_THROW((Box<2>({1.0, 0.0}, {0.0, 1.0})), GeometryError);
  EXPECT_NO_THROW((Box<2>({0.0, 0.0}, {0.0, 0.0})));
}

TEST(BoxIntersects, SharedCornerCounts) {
  EXPECT_TRUE(box_intersects(Box<2>({0, 0}, {1, 1}), Box<2>({1, 1}, {2, 2})));
  EXPECT_FALSE(box_intersects(Box<2>({0, 0}, {1, 1}), Box<2>({2, 2}, {3, 3})));
}

TEST(BoxIntersects, MatchesPerDimensionOverlap) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Box<3> a = random_box(rng);
    const Box<3> b = random_box(rng);
    bool expect = true;
    for (std::size_t d = 0; d < 3; ++d) {
      // [a.lo, a.hi] and [b.lo, b.hi] overlap iff max(lo) <= min(hi).
      expect = expect && std::max(a.lower[d], b.lower[d]) <= std::min(a.upper[d], b.upper[d]);
    }
    EXPECT_EQ(box_intersects(a, b), expect);
  }
}

TEST(Interval, WrapAngleIsHalfOpen) {
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), -kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi), -kPi);
  EXPECT_NEAR(wrap_angle(3.0 * kPi + 0.5), -kPi + 0.5, 1e-12);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double w = wrap_angle(u(rng));
    EXPECT_GE(w, -kPi);
    EXPECT_LT(w, kPi);
  }
}

TEST(Interval, CosSinRangesContainSamples) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lo(-10.0, 10.0);
  std::uniform_real_distribution<double> wd(0.0, 4.0);
  for (int i = 0; i < 300; ++i) {
    const Interval x{lo(rng), 0.0};
    const Interval iv{x.lo, x.lo + wd(rng)};
    const Interval c = interval_cos(iv);
    const Interval s = interval_sin(iv);
    double cmin = 2, cmax = -2, smin = 2, smax = -2;
    for (int k = 0; k <= 2000; ++k) {
      const double t = iv.lo + iv.width() * k / 2000.0;
      cmin = std::min(cmin, std::cos(t));
      cmax = std::max(cmax, std::cos(t));
      smin = std::min(smin, std::sin(t));
      smax = std::max(smax, std::sin(t));
    }
    EXPECT_LE(c.lo, cmin + 1e-15);
    EXPECT_GE(c.hi, cmax - 1e-15);
    EXPECT_LE(s.lo, smin + 1e-15);
    EXPECT_GE(s.hi, smax - 1e-15);
    // Tight: dense sampling gets within the sampling error.
    EXPECT_NEAR(c.lo, cmin, 1e-5);
    EXPECT_NEAR(s.hi, smax, 1e-5);
  }
}

TEST(Interval, AngularContainsWraps) {
  EXPECT_TRUE(angular_contains({kPi / 3, 2 * kPi / 3}, kPi / 2 + kTwoPi));
  EXPECT_TRUE(angular_contains({3.0, 3.5}, -3.0));  // -3 + 2pi = 3.28
  EXPECT_FALSE(angular_contains({0.0, 1.0}, -0.5));
  EXPECT_TRUE(angular_intersects({3.0, 3.3}, {-3.1, -3.0}));
}

TEST(Polytope, BoxAndHalfspaceExamples) {
  const Box<3> unit({0, 0, 0}, {1, 1, 1});
  EXPECT_TRUE(polytope_intersects_box(Polytope<3>::from_box(unit), unit));
  const Polytope<3> half({{1.0, 0.0, 0.0}}, {-1.0});
  EXPECT_FALSE(polytope_intersects_box(half, unit));
  EXPECT_TRUE(Polytope<3>::empty().is_empty());
  EXPECT_FALSE(polytope_intersects_box(Polytope<3>::empty(), unit));
}

TEST(Polytope, RejectsDegenerateRepresentation) {
  EXPECT_THROW(Polytope<3>({{0.0, 0.0, 0.0}}, {1.0}), GeometryError);
  EXPECT_THROW(Polytope<3>({{1.0, 0.0, 0.0}}, {1.0, 2.0}), GeometryError);
  EXPECT_THROW(Polytope<3>({{NAN, 0.0, 0.0}}, {1.0}), GeometryError);
}

TEST(Polytope, IntersectionMatchesFourierMotzkinOracle) {
  std::mt19937_64 rng(17);
  int checked = 0, ambiguous = 0, hits = 0;
  while (checked < 500) {
    const Polytope<3> p = random_polytope(rng);
    const Box<3> b = random_box(rng, 3.0, 2.5);
    // Route 1: a sampled box point inside p proves intersection.
    bool witness = false;
    for (int i = 0; i <= 4 && !witness; ++i) {
      for (int j = 0; j <= 4 && !witness; ++j) {
        for (int k = 0; k <= 4 && !witness; ++k) {
          const Vec3 x{b.lower[0] + b.widths()[0] * i / 4.0, b.lower[1] + b.widths()[1] * j / 4.0,
                       b.lower[2] + b.widths()[2] * k / 4.0};
          witness = p.contains(x);
        }
      }
    }
    // Route 2: exact elimination over the polytope and box constraints.
    std::vector<std::array<double, 4>> rows;
    for (std::size_t k = 0; k < p.size(); ++k) {
      rows.push_back({p.normals()[k][0], p.normals()[k][1], p.normals()[k][2], p.offsets()[k]});
    }
    for (std::size_t d = 0; d < 3; ++d) {
      std::array<double, 4> up{}, dn{};
      up[d] = 1.0;
      up[3] = b.upper[d];
      dn[d] = -1.0;
      dn[3] = -b.lower[d];
      rows.push_back(up);
      rows.push_back(dn);
    }
    const double slack = fm_min_slack(rows);
    if (std::abs(slack) < 1e-7) {
      ++ambiguous;
      continue;
    }
    const bool expect = slack > 0.0;
    const bool got = polytope_intersects_box(p, b);
    EXPECT_EQ(got, expect);
    if (witness) {
      EXPECT_TRUE(got);
    }
    hits += expect ? 1 : 0;
    ++checked;
  }
  EXPECT_LT(ambiguous, 25);
  EXPECT_GT(hits, 50);
  EXPECT_LT(hits, 450);
}

TEST(Polytope, PrismPathAgreesWithLp) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 400; ++i) {
    const Box<3> src = random_box(rng, 3.0, 2.0);
    const double a0 = ang(rng);
    const Polytope<3> prism = rotate_box_outer_prism(src, {a0, a0 + 0.5 * std::abs(u(rng))});
    const Polytope<3> plain(prism.normals(), prism.offsets());
    const Box<3> b = random_box(rng, 4.0, 1.5);
    EXPECT_EQ(polytope_intersects_box(prism, b), polytope_intersects_box(plain, b));
  }
}

TEST(Polytope, ProjectionIsClosestPoint) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 50; ++i) {
    const Box<3> b = random_box(rng);
    const RigidMotion2 m{0.7, 0.3, -0.2};
    const Polytope<3> p = transform_polytope(Polytope<3>::from_box(b), m);
    const Vec3 x = project_onto(p, Vec3{0.0, 0.0, 0.0}, 1e-12, 20000);
    EXPECT_TRUE(p.contains(x, 1e-8));
    // The projection in the frame equals the frame image of the projection
    // of the origin's preimage onto the box.
    const Vec3 q = m.from_frame({0.0, 0.0, 0.0});
    Vec3 c{};
    for (std::size_t d = 0; d < 3; ++d) c[d] = std::clamp(q[d], b.lower[d], b.upper[d]);
    const Vec3 expect = m.to_frame(c);
    for (std::size_t d = 0; d < 3; ++d) EXPECT_NEAR(x[d], expect[d], 1e-7);
  }
}

TEST(TransformPolytope, IdentityAndTranslation) {
  const Box<3> b({0, 0, 0}, {1, 2, 0.5});
  const Polytope<3> p = Polytope<3>::from_box(b);
  const Polytope<3> same = transform_polytope(p, {});
  for (const auto& v : b.vertices()) EXPECT_TRUE(same.contains(v, 1e-12));
  const Polytope<3> shifted = transform_polytope(p, {0.0, 1.0, 2.0});
  for (const auto& v : b.vertices()) {
    EXPECT_TRUE(shifted.contains({v[0] - 1.0, v[1] - 2.0, v[2]}, 1e-12));
  }
  EXPECT_FALSE(shifted.contains({0.5, 0.5, 0.25}));
}

TEST(TransformPolytope, QuarterTurnMatchesVertexImages) {
  const Box<3> seg({0, 0, 0}, {1, 0, 0});
  const RigidMotion2 m{kPi / 2, 0.0, 0.0};
  // Prism form so the 2-D footprint can be a segment.
  const Polytope<3> p = transform_polytope(
      Polytope<3>::from_prism({{{0.0, 0.0}, {1.0, 0.0}}, {0.0, 0.0}}), m);
  for (const auto& v : seg.vertices()) {
    const double c = std::cos(kPi / 2), s = std::sin(kPi / 2);
    const Vec3 img{c * v[0] + s * v[1], -s * v[0] + c * v[1], v[2] - kPi / 2};
    EXPECT_TRUE(p.contains(img, 1e-12));
  }
  EXPECT_TRUE(p.contains({0.0, -1.0, -kPi / 2}, 1e-12));
  EXPECT_FALSE(p.contains({0.0, 1.0, -kPi / 2}, 1e-9));
}

TEST(TransformPolytope, InverseMotionRestoresMembership) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const Polytope<3> p = Polytope<3>({{1, 0.2, 0}, {-0.3, 1, 0.1}, {0, -1, 0}, {-1, 0, 0.5}, {0, 0, 1}, {0, 0, -1}},
                                    {2, 3, 1.5, 2.5, 1, 1});
  const symsynth::symmetry::GroupElement g{0.9, 1.3, -0.4};
  const auto inv = symsynth::symmetry::inverse(g);
  const Polytope<3> back = transform_polytope(transform_polytope(p, g.motion()), inv.motion());
  int agree = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3 x{u(rng), u(rng), 0.3 * u(rng)};
    bool near_face = false;
    for (std::size_t k = 0; k < p.size(); ++k) {
      near_face = near_face || std::abs(Polytope<3>::dot(p.normals()[k], x) - p.offsets()[k]) < 1e-9;
    }
    if (near_face) continue;
    EXPECT_EQ(p.contains(x), back.contains(x));
    ++agree;
  }
  EXPECT_GT(agree, 990);
}

TEST(RotateBoxOuter, DegenerateIntervalIsExactRotation) {
  const Box<3> b({0.5, -0.2, 0.0}, {1.5, 0.4, 0.1});
  const double th = 0.7;
  const Box<3> out = rotate_box_outer(b, {th, th});
  double lo0 = HUGE_VAL, hi0 = -HUGE_VAL, lo1 = HUGE_VAL, hi1 = -HUGE_VAL;
  for (const auto& v : b.vertices()) {
    const double u = std::cos(th) * v[0] - std::sin(th) * v[1];
    const double w = std::sin(th) * v[0] + std::cos(th) * v[1];
    lo0 = std::min(lo0, u), hi0 = std::max(hi0, u), lo1 = std::min(lo1, w), hi1 = std::max(hi1, w);
  }
  EXPECT_LE(out.lower[0], lo0);
  EXPECT_GE(out.upper[0], hi0);
  EXPECT_NEAR(out.lower[0], lo0, 1e-13);
  EXPECT_NEAR(out.upper[1], hi1, 1e-13);
  EXPECT_DOUBLE_EQ(out.lower[2], th);
  EXPECT_DOUBLE_EQ(out.upper[2], 0.1 + th);
}

TEST(RotateBoxOuter, SquareContainsEndpointRotations) {
  const Box<3> sq({-1, -1, 0}, {1, 1, 0});
  const Box<3> out = rotate_box_outer(sq, {0.2, 0.9});
  EXPECT_TRUE(out.contains(Vec3{1.0, 1.0, 0.5}) || out.upper[0] >= 1.0);
  for (double th : {0.2, 0.9}) {
    for (const auto& v : sq.vertices()) {
      const Vec3 r{std::cos(th) * v[0] - std::sin(th) * v[1],
                   std::sin(th) * v[0] + std::cos(th) * v[1], th};
      EXPECT_TRUE(out.contains(r));
    }
  }
}

TEST(RotateBoxOuter, SegmentArcApexIsCovered) {
  const Box<3> seg({0, 0, 0}, {1, 0, 0});
  const Box<3> out = rotate_box_outer(seg, {0.0, kPi / 2});
  for (int k = 0; k <= 1000; ++k) {
    const double th = kPi / 2 * k / 1000.0;
    EXPECT_TRUE(out.contains(Vec3{std::cos(th), std::sin(th), th}));
    EXPECT_TRUE(out.contains(Vec3{0.0, 0.0, th}));
  }
}

TEST(RotateBoxOuter, ContainsDenselySampledRotations) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> lo(-4.0, 4.0);
  std::uniform_real_distribution<double> wd(0.0, 2.5);
  for (int i = 0; i < 200; ++i) {
    const Box<3> b = random_box(rng, 3.0, 2.0);
    const double a0 = lo(rng);
    const Interval a{a0, a0 + wd(rng)};
    const Box<3> out = rotate_box_outer(b, a);
    for (int k = 0; k <= 1000; ++k) {
      const double th = a.lo + a.width() * k / 1000.0;
      for (const auto& v : b.vertices()) {
        const Vec3 r{std::cos(th) * v[0] - std::sin(th) * v[1],
                     std::sin(th) * v[0] + std::cos(th) * v[1], v[2] + th};
        ASSERT_TRUE(out.contains(r)) << "box " << to_string(b) << " angle " << th;
      }
    }
  }
}

TEST(RotateBoxOuter, MonotoneInTheInterval) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Box<3> b = random_box(rng, 3.0, 2.0);
    const double lo = -4.0 + 8.0 * u(rng);
    const Interval big{lo, lo + 3.0 * u(rng)};
    const double s0 = big.lo + big.width() * u(rng);
    const Interval small{s0, s0 + (big.hi - s0) * u(rng)};
    EXPECT_TRUE(rotate_box_outer(b, big).contains(rotate_box_outer(b, small)));
  }
}

TEST(RotateBoxOuterPrism, ContainsDenselySampledRotations) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> lo(-4.0, 4.0);
  std::uniform_real_distribution<double> wd(0.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const Box<3> b = random_box(rng, 3.0, 2.0);
    const double a0 = lo(rng);
    const Interval a{a0, a0 + wd(rng)};
    const Polytope<3> p = rotate_box_outer_prism(b, a);
    for (int k = 0; k <= 200; ++k) {
      const double th = a.lo + a.width() * k / 200.0;
      for (const auto& v : b.vertices()) {
        const Vec3 r{std::cos(th) * v[0] - std::sin(th) * v[1],
                     std::sin(th) * v[0] + std::cos(th) * v[1], v[2] + th};
        ASSERT_TRUE(p.contains(r, 1e-12));
      }
    }
  }
}

TEST(SpatialIndex, SingleEntryAndCollinear) {
  using Ix = SpatialIndex<3>;
  const Ix one({{Box<3>({5, 5, 5}, {6, 6, 6}), 42U}});
  EXPECT_EQ(one.knn({0, 0, 0}, 1), std::vector<std::uint32_t>{42U});
  const Ix line({{Box<3>({3, 0, 0}, {3, 0, 0}), 0U},
                 {Box<3>({1, 0, 0}, {1, 0, 0}), 1U},
                 {Box<3>({2, 0, 0}, {2, 0, 0}), 2U}});
  EXPECT_EQ(line.knn({0, 0, 0}, 2), (std::vector<std::uint32_t>{1U, 2U}));
  EXPECT_THROW((void)Ix({}).knn({0, 0, 0}, 1), std::invalid_argument);
  EXPECT_THROW((void)line.knn({0, 0, 0}, 0), std::invalid_argument);
}

TEST(SpatialIndex, KnnMatchesBruteForce) {
  std::mt19937_64 rng(47);
  std::vector<SpatialIndex<3>::Entry> entries;
  for (std::uint32_t k = 0; k < 729; ++k) entries.push_back({random_box(rng, 5.0, 0.6), k});
  // Duplicate a few boxes so that ties must resolve by key.
  entries[100].box = entries[7].box;
  entries[500].box = entries[7].box;
  const SpatialIndex<3> ix(entries);
  std::uniform_real_distribution<double> q(-6.0, 6.0);
  for (int i = 0; i < 100; ++i) {
    const Vec3 p = i == 0 ? entries[7].box.center() : Vec3{q(rng), q(rng), q(rng)};
    std::vector<std::pair<double, std::uint32_t>> all;
    for (const auto& e : entries) all.emplace_back(squared_distance(e.box, p), e.key);
    std::sort(all.begin(), all.end());
    for (std::size_t k : {1U, 5U, 20U}) {
      std::vector<std::uint32_t> expect;
      for (std::size_t j = 0; j < k; ++j) expect.push_back(all[j].second);
      EXPECT_EQ(ix.knn(p, k), expect);
    }
  }
}
