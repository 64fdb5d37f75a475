#include <gtest/gtest.h>

#include <array>

#include "leaklab/security_game.hpp"
#include "test_util.hpp"

using namespace leaklab;

namespace {

// Oracle: first lexicographic 1-based triple whose leakage differs.
std::optional<std::array<std::size_t, 3>> first_mismatch(const ChallengeSubmission& sub,
                                                         DistanceKind kind) {
  const std::size_t q = sub.left.size();
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j)
      for (std::size_t k = 0; k < q; ++k)
        if (leak(kind, sub.left[i], sub.left[j], sub.left[k]) !=
            leak(kind, sub.right[i], sub.right[j], sub.right[k]))
          return std::array<std::size_t, 3>{i + 1, j + 1, k + 1};
  return std::nullopt;
}

class FixedAdversary : public StaticAdversary {
 public:
  FixedAdversary(ChallengeSubmission sub, bool brute_force)
      : sub_(std::move(sub)), brute_force_(brute_force) {}
  ChallengeSubmission submit(Rng&) override { return sub_; }
  int guess(const EvalOracle& oracle, const ParamsTag& params,
            std::span<const CiphertextHandle> cts, Rng&) override {
    if (!brute_force_) return 0;
    // Hash every eval answer into one bit.
    std::uint64_t h = 0;
    for (const auto& a : cts)
      for (const auto& b : cts)
        for (const auto& c : cts) {
          const auto out = oracle.eval(params, a, b, c);
          h = mix64(h ^ (out ? std::hash<std::string>{}(out->to_string()) : 7));
        }
    return static_cast<int>(h & 1);
  }

 private:
  ChallengeSubmission sub_;
  bool brute_force_;
};

GameSetup setup(std::size_t trials, std::uint64_t seed) {
  GameSetup g;
  g.d = 3;
  g.trials = trials;
  g.seed = seed;
  return g;
}

}  // namespace

TEST(Validate, Examples) {
  const auto fl = DistanceKind::kFloorLog;
  EXPECT_TRUE(validate_submission({{1, 2, 3}, {1, 2, 3}}, fl).valid());
  const auto bad = validate_submission({{1, 2, 3}, {1, 2, 4}}, fl, 3);
  EXPECT_EQ(bad.status, ValidationResult::Status::kLeakMismatch);
  EXPECT_EQ(bad.triple, (std::array<std::size_t, 3>{1, 2, 3}));
  const auto len = validate_submission({{1, 2}, {1}}, fl);
  EXPECT_EQ(len.status, ValidationResult::Status::kLengthMismatch);
  EXPECT_EQ(len.triple, (std::array<std::size_t, 3>{0, 0, 0}));
  EXPECT_EQ(validate_submission({{1, 9}, {1, 2}}, fl, 3).status,
            ValidationResult::Status::kOutOfRange);
  // Same gaps under a shift leak the same.
  EXPECT_TRUE(validate_submission({{1, 2, 4}, {3, 4, 6}}, fl, 3).valid());
}

TEST(Validate, MatchesBruteForceOracle) {
  Rng rng(77);
  for (int trial = 0; trial < 3000; ++trial) {
    const auto kind = static_cast<DistanceKind>(trial % 3);
    const std::size_t q = uniform_int(rng, 1, 6);
    ChallengeSubmission sub;
    for (std::size_t k = 0; k < q; ++k) {
      sub.left.push_back(uniform_int(rng, 1, 16));
      // Often a shifted copy so valid submissions show up.
      sub.right.push_back(trial % 2 ? sub.left.back() + 8 : uniform_int(rng, 1, 16));
    }
    const auto res = validate_submission(sub, kind);
    const auto oracle = first_mismatch(sub, kind);
    ASSERT_EQ(res.valid(), !oracle.has_value());
    if (oracle) ASSERT_EQ(res.triple, *oracle);
  }
}

TEST(SecurityGame, ConstantAdversaryHasNoAdvantage) {
  const auto res = run_security_game(setup(2000, 1), [](std::size_t) {
    return std::make_unique<FixedAdversary>(ChallengeSubmission{{1, 2, 3}, {2, 3, 4}}, false);
  });
  EXPECT_EQ(res.estimate.advantage, 0.0);
  EXPECT_EQ(res.estimate.invalid, 0u);
  EXPECT_EQ(res.estimate.trials, 2000u);
}

TEST(SecurityGame, BruteForceAdversaryOnValidSubmission) {
  const auto res = run_security_game(setup(10000, 2), [](std::size_t) {
    return std::make_unique<FixedAdversary>(ChallengeSubmission{{1, 2, 3}, {2, 3, 4}}, true);
  });
  EXPECT_LE(res.estimate.advantage, res.estimate.ci_halfwidth + 1e-12);
}

TEST(SecurityGame, InvalidSubmissionsAreFlaggedNotAborted) {
  const auto res = run_security_game(setup(500, 3), [](std::size_t) {
    return std::make_unique<FixedAdversary>(ChallengeSubmission{{1, 2, 3}, {1, 2, 4}}, true);
  });
  EXPECT_EQ(res.estimate.invalid, 500u);
  for (const auto& o : res.outcomes) EXPECT_FALSE(o.valid);
}

TEST(SecurityGame, DeterministicAcrossJobCounts) {
  auto make = [](std::size_t) {
    return std::make_unique<FixedAdversary>(ChallengeSubmission{{1, 4, 6}, {2, 5, 7}}, true);
  };
  GameSetup one = setup(3000, 9), four = setup(3000, 9);
  four.jobs = 4;
  const auto a = run_security_game(one, make);
  const auto b = run_security_game(four, make);
  ASSERT_EQ(a.outcomes.size(), b.outcomes.size());
  for (std::size_t k = 0; k < a.outcomes.size(); ++k) {
    ASSERT_EQ(a.outcomes[k].b, b.outcomes[k].b);
    ASSERT_EQ(a.outcomes[k].output, b.outcomes[k].output);
  }
}

TEST(AdvantageEstimate, Arithmetic) {
  std::vector<TrialOutcome> outs;
  // b = 0: outputs 1,1,0,0 ; b = 1: outputs 1,0,0,0.
  for (int o : {1, 1, 0, 0}) outs.push_back({0, o, true, {}});
  for (int o : {1, 0, 0, 0}) outs.push_back({1, o, true, {}});
  const auto e = estimate_advantage(outs);
  EXPECT_DOUBLE_EQ(e.p_left, 0.5);
  EXPECT_DOUBLE_EQ(e.p_right, 0.25);
  EXPECT_DOUBLE_EQ(e.advantage, 0.25);
  EXPECT_DOUBLE_EQ(e.correct_rate, 3.0 / 8.0);
  const double pooled = 3.0 / 8.0;
  EXPECT_NEAR(e.sigma, std::sqrt(pooled * (1 - pooled) * 0.5), 1e-12);
  EXPECT_NEAR(e.ci_halfwidth, 1.96 * e.sigma, 1e-12);
}
