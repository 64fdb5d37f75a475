#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cstdlib>

#include "leaklab/leakage.hpp"
#include "test_util.hpp"

using namespace leaklab;

namespace {

// Oracle: sign(a - b) * (floor(log2 |a - b|) + 1) by repeated halving.
std::int64_t fld_oracle(std::uint64_t a, std::uint64_t b) {
  if (a == b) return 0;
  std::uint64_t gap = a > b ? a - b : b - a;
  std::int64_t bits = 0;
  while (gap != 0) {
    gap /= 2;
    ++bits;
  }
  return a > b ? bits : -bits;
}

Comparison cmp_oracle(std::uint64_t a, std::uint64_t b) {
  if (a < b) return Comparison::kLess;
  if (a > b) return Comparison::kGreater;
  return Comparison::kEqual;
}

Plaintext pt(std::uint64_t v, int d = 8) { return Plaintext(v, d); }

}  // namespace

TEST(Comp, Examples) {
  EXPECT_EQ(comp(pt(3), pt(7)), Comparison::kLess);
  EXPECT_EQ(comp(pt(5), pt(5)), Comparison::kEqual);
  EXPECT_EQ(comp(pt(256), pt(1)), Comparison::kGreater);
}

TEST(Comp, WidthMismatch) {
  EXPECT_LEAKLAB_ERROR(comp(Plaintext(3, 4), Plaintext(3, 5)), kWidthMismatch);
  EXPECT_LEAKLAB_ERROR(fld(Plaintext(3, 4), Plaintext(3, 5)), kWidthMismatch);
}

TEST(Plaintext, RangeAndWidth) {
  EXPECT_LEAKLAB_ERROR(Plaintext(0, 4), kOutOfRange);
  EXPECT_LEAKLAB_ERROR(Plaintext(17, 4), kOutOfRange);
  EXPECT_LEAKLAB_ERROR(Plaintext(1, 0), kInvalidArgument);
  EXPECT_LEAKLAB_ERROR(Plaintext(1, 63), kInvalidArgument);
  EXPECT_EQ(Plaintext(16, 4).value(), 16u);
}

TEST(Fld, Examples) {
  EXPECT_EQ(fld(pt(7), pt(7)), 0);
  EXPECT_EQ(fld(pt(5), pt(1)), 3);
  EXPECT_EQ(fld(pt(1), pt(5)), -3);
}

TEST(Fld, MatchesOracleExhaustivelyAtSmallWidth) {
  const int d = 6;
  for (std::uint64_t a = 1; a <= domain_size(d); ++a)
    for (std::uint64_t b = 1; b <= domain_size(d); ++b)
      ASSERT_EQ(floor_log_distance(a, b), fld_oracle(a, b)) << a << "," << b;
}

TEST(Fld, PropertiesOnRandomPairs) {
  Rng rng(11);
  const int d = 40;
  for (int k = 0; k < 100000; ++k) {
    const std::uint64_t x = uniform_int(rng, 1, domain_size(d));
    const std::uint64_t y = uniform_int(rng, 1, domain_size(d));
    const std::uint64_t z = uniform_int(rng, 1, domain_size(d));
    const auto fxy = floor_log_distance(x, y);
    ASSERT_EQ(fxy, fld_oracle(x, y));
    ASSERT_EQ(fxy, -floor_log_distance(y, x));
    ASSERT_EQ(fxy == 0, x == y);
    ASSERT_LE(std::llabs(fxy), d);
    const auto gxy = x > y ? x - y : y - x;
    const auto gxz = x > z ? x - z : z - x;
    if (gxy < gxz) ASSERT_LE(std::llabs(fxy), std::llabs(floor_log_distance(x, z)));
  }
}

TEST(Fld, RangeAtTheEdges) {
  EXPECT_EQ(floor_log_distance(domain_size(62), 1), 62);
  EXPECT_EQ(floor_log_distance(1, domain_size(10)), -10);
}

TEST(Leak, Examples) {
  const auto k = DistanceKind::kFloorLog;
  const LeakOutput up{Comparison::kLess, Comparison::kLess, Comparison::kLess, 1};
  const LeakOutput flat{Comparison::kEqual, Comparison::kEqual, Comparison::kEqual, 0};
  const LeakOutput down{Comparison::kGreater, Comparison::kGreater,
                        Comparison::kGreater, 1};
  EXPECT_EQ(leak_from_dist(k, pt(1), pt(2), pt(10)), up);
  EXPECT_EQ(leak_from_dist(k, pt(4), pt(4), pt(4)), flat);
  EXPECT_EQ(leak_from_dist(k, pt(10), pt(2), pt(1)), down);
}

TEST(Leak, MatchesOracleAndIsPermutationInvariant) {
  Rng rng(5);
  for (DistanceKind kind :
       {DistanceKind::kFloorLog, DistanceKind::kExact, DistanceKind::kOrderOnly}) {
    for (int k = 0; k < 20000; ++k) {
      // Small range so ties show up.
      std::array<std::uint64_t, 3> v{};
      for (auto& x : v) x = uniform_int(rng, 1, k % 2 ? 16 : domain_size(30));
      const LeakOutput out = leak(kind, v[0], v[1], v[2]);
      ASSERT_EQ(out.c01, cmp_oracle(v[0], v[1]));
      ASSERT_EQ(out.c12, cmp_oracle(v[1], v[2]));
      ASSERT_EQ(out.c02, cmp_oracle(v[0], v[2]));
      ASSERT_TRUE(out.comparisons_consistent());
      auto s = v;
      std::sort(s.begin(), s.end());
      const auto lower = std::llabs(distance(kind, s[0], s[1]));
      const auto upper = std::llabs(distance(kind, s[1], s[2]));
      ASSERT_EQ(out.closeness_bit, lower < upper ? 1 : 0);
      auto p = v;
      std::sort(p.begin(), p.end());
      do {
        ASSERT_EQ(leak(kind, p[0], p[1], p[2]).closeness_bit, out.closeness_bit);
      } while (std::next_permutation(p.begin(), p.end()));
    }
  }
}

TEST(Leak, InconsistentComparisonsDetected) {
  const LeakOutput cyclic{Comparison::kLess, Comparison::kLess, Comparison::kGreater, 0};
  EXPECT_FALSE(cyclic.comparisons_consistent());
}

TEST(DistanceKindNames, RoundTrip) {
  for (DistanceKind kind :
       {DistanceKind::kFloorLog, DistanceKind::kExact, DistanceKind::kOrderOnly}) {
    EXPECT_EQ(parse_distance_kind(to_string(kind)), kind);
  }
  EXPECT_EQ(parse_distance_kind("Order-Only"), DistanceKind::kOrderOnly);
  EXPECT_LEAKLAB_ERROR(parse_distance_kind("euclid"), kInvalidArgument);
}

TEST(Bisection, FloorLogAndExactHoldExhaustively) {
  const auto floorlog =
      check_bisection(DistanceKind::kFloorLog, 8, BisectionMode::Exhaustive());
  EXPECT_TRUE(floorlog.holds);
  EXPECT_EQ(floorlog.triples_checked, 256ull * 255 * 254 / 6);
  EXPECT_TRUE(check_bisection(DistanceKind::kExact, 8, BisectionMode::Exhaustive()).holds);
}

TEST(Bisection, ConstantDistanceFailsAtFirstTriple) {
  const DistanceFn constant = [](std::uint64_t a, std::uint64_t b) -> std::int64_t {
    return a == b ? 0 : 1;
  };
  const auto res = check_bisection(constant, 4, BisectionMode::Exhaustive());
  ASSERT_FALSE(res.holds);
  EXPECT_EQ(*res.counterexample, (std::array<std::uint64_t, 3>{1, 2, 3}));
  EXPECT_FALSE(check_bisection(DistanceKind::kOrderOnly, 3, BisectionMode::Exhaustive()).holds);
}

TEST(Bisection, ZeroOnDistinctInputsIsReported) {
  const DistanceFn degenerate = [](std::uint64_t, std::uint64_t) -> std::int64_t {
    return 0;
  };
  const auto res = check_bisection(degenerate, 3, BisectionMode::Exhaustive());
  ASSERT_FALSE(res.holds);
  EXPECT_EQ(*res.counterexample, (std::array<std::uint64_t, 3>{1, 2, 1}));
}

TEST(Bisection, ExhaustiveBudget) {
  EXPECT_LEAKLAB_ERROR(
      check_bisection(DistanceKind::kFloorLog, 11, BisectionMode::Exhaustive()),
      kBudgetExceeded);
}

TEST(Bisection, SampledIsDeterministic) {
  const auto mode = BisectionMode::Sampled(20000, 3);
  const auto a = check_bisection(DistanceKind::kFloorLog, 40, mode);
  const auto b = check_bisection(DistanceKind::kFloorLog, 40, mode);
  EXPECT_TRUE(a.holds);
  EXPECT_EQ(a.triples_checked, 20000u);
  EXPECT_EQ(a.triples_checked, b.triples_checked);
  const auto ore = check_bisection(DistanceKind::kOrderOnly, 40, mode);
  ASSERT_FALSE(ore.holds);
  EXPECT_EQ(ore.counterexample, check_bisection(DistanceKind::kOrderOnly, 40, mode).counterexample);
}
