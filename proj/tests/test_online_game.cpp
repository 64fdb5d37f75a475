#include <gtest/gtest.h>

#include <map>
#include <sstream>
#include <tuple>

#include "leaklab/adversaries.hpp"
#include "leaklab/online_game.hpp"
#include "test_util.hpp"

using namespace leaklab;

namespace {

// Oracle: worst-case mistakes the halving learner can be forced into when
// the adversary may pick any concept threshold in [t_lo, t_hi] consistent
// with the labels so far. Rounds without a mistake never help the adversary
// (they leave the learner unchanged and only shrink the version space), so
// only mistake rounds are enumerated.
class HalvingWorstCase {
 public:
  explicit HalvingWorstCase(int d) : d_(d), top_(domain_size(d)) {}

  int solve() { return worst(1, top_, HalvingLearner(d_)); }

 private:
  int worst(std::uint64_t t_lo, std::uint64_t t_hi, const HalvingLearner& learner) {
    const auto key = std::make_tuple(t_lo, t_hi, learner.largest_positive(),
                                     learner.smallest_negative());
    if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
    int best = 0;
    for (std::uint64_t x = 1; x <= top_; ++x) {
      const int predicted = learner.predict(x);
      const int label = 1 - predicted;
      // Thresholds t with (x < t) == label.
      const std::uint64_t lo = label ? std::max(t_lo, x + 1) : t_lo;
      const std::uint64_t hi = label ? t_hi : std::min(t_hi, x);
      if (lo > hi) continue;
      HalvingLearner next = learner;
      next.observe(x, label);
      best = std::max(best, 1 + worst(lo, hi, next));
    }
    memo_[key] = best;
    return best;
  }

  int d_;
  std::uint64_t top_;
  std::map<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>, int> memo_;
};

class ScriptedPlain final : public PlainAdversary {
 public:
  explicit ScriptedPlain(std::vector<std::uint64_t> xs) : xs_(std::move(xs)) {}
  std::string name() const override { return "scripted"; }
  std::optional<std::uint64_t> next(std::span<const Round> history, Rng&) override {
    if (history.size() >= xs_.size()) return std::nullopt;
    return xs_[history.size()];
  }

 private:
  std::vector<std::uint64_t> xs_;
};

PlainAdversaryFactory scripted(std::vector<std::uint64_t> xs) {
  return [xs](int, std::uint64_t, const PlainLearner&) {
    return std::make_unique<ScriptedPlain>(xs);
  };
}

EncLearnerFactory lencthr() {
  return [](const EvalOracle& o) { return std::make_unique<LEncThrLearner>(o); };
}

// Checks the potential and correct-side invariants on one transcript.
void check_lencthr_transcript(const GameTranscript& t) {
  std::optional<std::int64_t> previous;
  for (std::size_t i = 0; i < t.rounds.size(); ++i) {
    const Round& r = t.rounds[i];
    if (r.branch == PredictionBranch::kBelowPositive ||
        r.branch == PredictionBranch::kAboveNegative ||
        r.branch == PredictionBranch::kMalformed) {
      ASSERT_FALSE(r.mistake) << "round " << i << " branch " << to_string(r.branch);
    }
    if (r.potential_after) {
      ASSERT_GE(*r.potential_after, 0);
      if (previous && r.mistake && r.phase == LearnerPhase::kTwoAnchors) {
        ASSERT_LE(*r.potential_after, *previous - 1) << "round " << i;
      }
      if (!previous) ASSERT_LE(*r.potential_after, t.d);
    }
    if (r.potential_after) previous = r.potential_after;
  }
}

}  // namespace

TEST(Halving, WorstCaseOracleMatchesBound) {
  for (int d = 1; d <= 5; ++d) {
    const int worst = HalvingWorstCase(d).solve();
    EXPECT_LE(worst, d) << "d=" << d;
    EXPECT_GE(worst, d - 1) << "d=" << d;
  }
}

TEST(Halving, ScriptedExample) {
  HalvingLearner learner(3);
  PlainGameSetup setup{3, 10, 1, 5, false};
  const auto t = run_plain_game(setup, learner, scripted({4, 6, 5, 4, 6, 5, 1, 8}));
  EXPECT_LE(t.total_mistakes, 3u);
  EXPECT_TRUE(t.stopped_early);
}

TEST(Halving, RepeatedExampleAtMostOneMistake) {
  for (std::uint64_t x : {1, 3, 4, 5, 8}) {
    HalvingLearner learner(3);
    PlainGameSetup setup{3, 20, 1, 4, false};
    const auto t = run_plain_game(setup, learner, scripted(std::vector<std::uint64_t>(20, x)));
    EXPECT_LE(t.total_mistakes, 1u);
  }
}

TEST(Halving, AdaptiveAdversaryNearTight) {
  std::size_t most = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    HalvingLearner learner(10);
    PlainGameSetup setup{10, 10000, seed, std::nullopt, false};
    const auto t = run_plain_game(setup, learner, plain_adversary_factory("adaptive"));
    ASSERT_LE(t.total_mistakes, 10u);
    most = std::max(most, t.total_mistakes);
  }
  EXPECT_GE(most, 8u);
}

TEST(Halving, BoundAcrossWidths) {
  for (int d = 4; d <= 20; ++d) {
    for (const char* adv : {"adaptive", "random"}) {
      HalvingLearner learner(d);
      PlainGameSetup setup{d, 2000, static_cast<std::uint64_t>(d), std::nullopt, false};
      const auto t = run_plain_game(setup, learner, plain_adversary_factory(adv));
      ASSERT_LE(t.total_mistakes, static_cast<std::size_t>(d)) << adv << " d=" << d;
    }
  }
}

TEST(PlainGame, ConstantZeroNeverWrongOnEmptyConcept) {
  ConstantPlainLearner learner(0);
  PlainGameSetup setup{8, 500, 3, 1, false};
  const auto t = run_plain_game(setup, learner, plain_adversary_factory("random"));
  EXPECT_EQ(t.total_mistakes, 0u);
}

TEST(PlainGame, AdaptiveForcesFirstRoundMistakeOnConstant) {
  ConstantPlainLearner learner(0);
  PlainGameSetup setup{8, 5, 3, 2, false};
  const auto t = run_plain_game(setup, learner, plain_adversary_factory("adaptive"));
  ASSERT_FALSE(t.rounds.empty());
  EXPECT_EQ(t.rounds[0].plaintext, 1u);
  EXPECT_TRUE(t.rounds[0].mistake);
}

TEST(PlainGame, ObliviousHistoryIsMasked) {
  class Spy final : public PlainAdversary {
   public:
    explicit Spy(bool* saw_prediction) : saw_(saw_prediction) {}
    std::string name() const override { return "spy"; }
    std::optional<std::uint64_t> next(std::span<const Round> h, Rng&) override {
      for (const auto& r : h)
        if (r.prediction != -1) *saw_ = true;
      return 3;
    }

   private:
    bool* saw_;
  };
  bool saw = false;
  HalvingLearner learner(4);
  PlainGameSetup setup{4, 10, 1, 8, true};
  run_plain_game(setup, learner, [&](int, std::uint64_t, const PlainLearner&) {
    return std::make_unique<Spy>(&saw);
  });
  EXPECT_FALSE(saw);
}

TEST(LEncThr, MistakeBoundAndPotential) {
  for (int d : {4, 8, 16, 32}) {
    for (const char* adv : {"adaptive", "random"}) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        EncGameSetup setup{d, DistanceKind::kFloorLog, 2000, seed, std::nullopt, false};
        const auto t = run_enc_game(setup, lencthr(), enc_adversary_factory(adv));
        ASSERT_LE(t.total_mistakes, static_cast<std::size_t>(d) + 4)
            << adv << " d=" << d << " seed=" << seed;
        check_lencthr_transcript(t);
      }
    }
  }
}

TEST(LEncThr, AdaptiveSmallWidthWithinBound) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    EncGameSetup setup{8, DistanceKind::kFloorLog, 5000, seed, std::nullopt, false};
    const auto t = run_enc_game(setup, lencthr(), enc_adversary_factory("adaptive"));
    ASSERT_LE(t.total_mistakes, 12u);
  }
}

TEST(LEncThr, WrongParamsStreamNoMistakes) {
  class ForeignOnly final : public EncAdversary {
   public:
    explicit ForeignOnly(const EncGameContext& c) : c_(c) {}
    std::string name() const override { return "foreign"; }
    std::optional<EncExample> next(std::span<const Round>, Rng& rng) override {
      const auto m = uniform_int(rng, 1, domain_size(c_.d));
      return EncExample{c_.registry->enc(c_.foreign.sk, m), c_.foreign.params};
    }

   private:
    EncGameContext c_;
  };
  EncGameSetup setup{10, DistanceKind::kFloorLog, 500, 1, std::nullopt, false};
  const auto t = run_enc_game(setup, lencthr(), [](const EncGameContext& c, const EncLearner&) {
    return std::make_unique<ForeignOnly>(c);
  });
  EXPECT_EQ(t.total_mistakes, 0u);
}

TEST(LEncThr, PhasesAdvance) {
  EncGameSetup setup{16, DistanceKind::kFloorLog, 3000, 5, std::nullopt, false};
  const auto t = run_enc_game(setup, lencthr(), enc_adversary_factory("adaptive"));
  bool two = false;
  for (const auto& r : t.rounds) two = two || r.phase == LearnerPhase::kTwoAnchors;
  EXPECT_TRUE(two);
  EXPECT_EQ(t.rounds.front().phase, LearnerPhase::kBootstrap);
}

TEST(OreBreaker, OrderOnlyNearRandomGuessing) {
  int in_band = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SymmetryStats stats;
    EncGameSetup setup{32, DistanceKind::kOrderOnly, 2000, seed, domain_size(31), false};
    const auto t = run_enc_game(setup, lencthr(), enc_adversary_factory("ore-breaker", &stats));
    const double rate = static_cast<double>(t.total_mistakes) / t.rounds.size();
    in_band += rate >= 0.45 && rate <= 0.55;
    EXPECT_EQ(stats.asymmetric_rounds, 0u);
    EXPECT_GT(stats.rounds_checked, 1000u);
  }
  EXPECT_GE(in_band, 8);
}

TEST(OreBreaker, FloorLogStaysBounded) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SymmetryStats stats;
    EncGameSetup setup{32, DistanceKind::kFloorLog, 2000, seed, domain_size(31), false};
    const auto t = run_enc_game(setup, lencthr(), enc_adversary_factory("ore-breaker", &stats));
    EXPECT_LE(t.total_mistakes, 36u);
    // Under floor-log leakage the two candidates are told apart.
    EXPECT_GT(stats.asymmetric_rounds, 0u);
  }
}

TEST(OreBreaker, NeedsMidpointConcept) {
  EncGameSetup setup{8, DistanceKind::kOrderOnly, 10, 1, 3, false};
  EXPECT_LEAKLAB_ERROR(run_enc_game(setup, lencthr(), enc_adversary_factory("ore-breaker")),
                       kPrecondition);
}

TEST(EncGame, DeterministicTranscripts) {
  EncGameSetup setup{12, DistanceKind::kFloorLog, 1000, 99, std::nullopt, false};
  std::ostringstream a, b;
  write_transcript_csv(a, run_enc_game(setup, lencthr(), enc_adversary_factory("adaptive")));
  write_transcript_csv(b, run_enc_game(setup, lencthr(), enc_adversary_factory("adaptive")));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')),
            "round,plaintext,prediction,label,mistake,potential");
}

TEST(AdversaryNames, UnknownRejected) {
  EXPECT_LEAKLAB_ERROR(plain_adversary_factory("ore-breaker"), kInvalidArgument);
  EXPECT_LEAKLAB_ERROR(enc_adversary_factory("sneaky"), kInvalidArgument);
}
