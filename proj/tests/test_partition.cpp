#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "tentropy/partition.hpp"
#include "tentropy/random.hpp"

using namespace tentropy;

namespace {

using F = PartitionOfUnity::Function;

void expect_partition(const PartitionOfUnity& p, double tol = 1e-10) {
  EXPECT_LE(p.sum_defect(), tol);
  for (const auto& e : p) {
    EXPECT_TRUE(std::any_of(e.begin(), e.end(), [](double v) { return v != 0.0; }));
    for (double v : e) EXPECT_GE(v, 0.0);
  }
}

// sup - inf of values over {x : h(x) > 0}
double oscillation(const std::vector<double>& values, const F& h) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t x = 0; x < h.size(); ++x) {
    if (h[x] > 0.0) {
      lo = std::min(lo, values[x]);
      hi = std::max(hi, values[x]);
    }
  }
  return hi - lo;
}

}  // namespace

TEST(SingletonPartition, Indicators) {
  const auto p = singleton_partition(build_system({0, 0, 1}));
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0], (F{1, 0, 0}));
  EXPECT_EQ(p[1], (F{0, 1, 0}));
  EXPECT_EQ(p[2], (F{0, 0, 1}));
  EXPECT_EQ(p.sum_defect(), 0.0);
}

TEST(Validate, Examples) {
  EXPECT_EQ(validate({{0.5, 0.5}, {0.5, 0.5}}, 1e-10).size(), 2u);
  try {
    validate({{1, 0}, {0, 0.9}}, 1e-10);
    FAIL() << "expected NotAPartition";
  } catch (const NotAPartition& e) {
    EXPECT_EQ(e.point, 1u);
    EXPECT_DOUBLE_EQ(e.sum, 0.9);
  }
  const auto dropped = validate({{1, 1}, {0, 0}}, 1e-10);
  EXPECT_EQ(dropped.size(), 1u);
  EXPECT_EQ(dropped[0], (F{1, 1}));
}

TEST(Validate, ClampsTinyNegativesAndRejectsLargeOnes) {
  const auto p = validate({{1.0 + 1e-12, 0.5}, {-1e-12, 0.5}}, 1e-10);
  EXPECT_EQ(p[1][0], 0.0);
  EXPECT_THROW(validate({{1.5, 1.0}, {-0.5, 0.0}}, 1e-10), NotAPartition);
  EXPECT_THROW(validate({{1.0}, {0.0, 1.0}}, 1e-10), SizeMismatch);
}

TEST(Validate, ReportsWorstPoint) {
  try {
    validate({{1, 0.7, 0.95}}, 1e-10);
    FAIL();
  } catch (const NotAPartition& e) {
    EXPECT_EQ(e.point, 1u);
  }
}

TEST(Join, UnitIsNeutral) {
  const auto d = random_partition(build_system({0, 1, 2, 0}), 3, 4);
  EXPECT_EQ(join(d, unit_partition(4)), d);
}

TEST(Join, SingletonsIdempotent) {
  const auto s = singleton_partition(build_system({1, 2, 0}));
  EXPECT_EQ(join(s, s), s);
}

TEST(Join, HalvesTimesIndicators) {
  const auto halves = validate({{0.5, 0.5}, {0.5, 0.5}}, 1e-12);
  const auto j = join(halves, singleton_partition(build_system({0, 1})));
  ASSERT_EQ(j.size(), 4u);
  EXPECT_EQ(j[0], (F{0.5, 0}));
  EXPECT_EQ(j[1], (F{0, 0.5}));
  EXPECT_EQ(j[2], (F{0.5, 0}));
  EXPECT_EQ(j[3], (F{0, 0.5}));
}

TEST(PullbackJoin, Examples) {
  const auto sys = build_system({1, 0, 3, 3});
  const auto d = random_partition(sys, 3, 9);
  EXPECT_EQ(pullback_join(sys, d, unit_partition(4), 2), d);

  const auto id = build_system({0, 1, 2});
  const auto a = random_partition(id, 2, 1), b = random_partition(id, 3, 2);
  EXPECT_EQ(pullback_join(id, a, b, 1), join(a, b));

  // deterministic alpha: each 1_y pairs with exactly one h = 1_{alpha(y)}
  const auto s = singleton_partition(sys);
  EXPECT_EQ(pullback_join(sys, s, s, 1), s);
}

TEST(PullbackJoin, SizeBoundAndPartitionProperty) {
  for (int trial = 0; trial < 50; ++trial) {
    RandomSystemParams p;
    p.max_points = 10;
    const auto rs = random_system(p, derive_seed(61, trial));
    const auto& sys = rs.op.system();
    const auto d = random_partition(sys, 1 + trial % 4, derive_seed(62, trial));
    const auto e = random_partition(sys, 1 + trial % 3, derive_seed(63, trial));
    for (std::size_t n = 1; n <= 3; ++n) {
      const auto pj = pullback_join(sys, d, e, n);
      EXPECT_LE(pj.size(), d.size() * e.size());
      expect_partition(pj);
    }
    const auto j = join(d, e);
    EXPECT_LE(j.size(), d.size() * e.size());
    expect_partition(j);
  }
}

TEST(OscillationRefinement, SeparatesLevelSets) {
  const auto t = from_weights(build_system({1, 0, 3, 3}), {1, 1, 1, 2});
  const auto r = oscillation_refinement(t, unit_partition(4), 1, 0.5);
  // A1 = (1, 1, 0, 3): level sets {0,1}, {2}, {3}
  ASSERT_EQ(r.size(), 3u);
  std::vector<F> got(r.begin(), r.end());
  std::sort(got.begin(), got.end());
  std::vector<F> want{{0, 0, 0, 1}, {0, 0, 1, 0}, {1, 1, 0, 0}};
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
  const auto a1 = t.apply(std::vector<double>(4, 1.0));
  for (const auto& h : r) EXPECT_EQ(oscillation(a1, h), 0.0);
}

TEST(OscillationRefinement, ConstantImageGivesUnitPartition) {
  const auto t = from_weights(build_system({1, 2, 0}), {2, 2, 2});
  const auto r = oscillation_refinement(t, unit_partition(3), 2, 0.1);
  EXPECT_EQ(r, unit_partition(3));
}

TEST(OscillationRefinement, BoundHoldsOnRandomSystems) {
  for (int trial = 0; trial < 60; ++trial) {
    RandomSystemParams p;
    p.max_points = 8;
    const auto rs = random_system(p, derive_seed(67, trial));
    const auto d = random_partition(rs.op.system(), 1 + trial % 3, derive_seed(68, trial));
    for (double eps : {0.5, 0.1, 0.01}) {
      for (std::size_t n = 1; n <= 3; ++n) {
        const auto e = oscillation_refinement(rs.op, d, n, eps);
        expect_partition(e);
        for (const auto& g : d) {
          const auto ang = power_apply(rs.op, n, g);
          for (const auto& h : e) EXPECT_LT(oscillation(ang, h), eps);
        }
      }
    }
  }
}

TEST(HatPartition, SumsToOneAndHasNarrowSupport) {
  const HatPartition hats(-1.0, 2.0, 0.25);
  for (int i = 0; i <= 300; ++i) {
    const double t = -1.0 + 3.0 * i / 300.0;
    const auto pr = hats.evaluate(t);
    EXPECT_NEAR(pr.left_value + pr.right_value, 1.0, 1e-15);
    const double left_node = -1.0 + 0.25 * static_cast<double>(pr.left);
    EXPECT_GE(t, left_node - 1e-12);
    EXPECT_LE(t, left_node + 0.25 + 1e-12);
  }
}

TEST(RandomPartition, Basics) {
  const auto sys = build_system({0, 1, 1, 2, 0});
  EXPECT_EQ(random_partition(sys, 1, 5), unit_partition(5));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto p = random_partition(sys, 4, seed);
    EXPECT_EQ(p.size(), 4u);
    expect_partition(p, 1e-12);
  }
  EXPECT_EQ(random_partition(sys, 3, 77), random_partition(sys, 3, 77));
  EXPECT_NE(random_partition(sys, 3, 77), random_partition(sys, 3, 78));
}
