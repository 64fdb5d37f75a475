#pragma once

// Mistake-bounded online games. A harness draws the hidden concept (and key),
// asks the adversary for an example, asks the learner for a prediction, then
// reveals the label to both.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leaklab/concepts.hpp"
#include "leaklab/fre_oracle.hpp"
#include "leaklab/leakage.hpp"
#include "leaklab/rng.hpp"

namespace leaklab {

enum class LearnerPhase {
  kNone,       // plain learners
  kBootstrap,  // no anchor yet
  kOneAnchor,  // positive anchor only
  kTwoAnchors,
};

// Which rule produced a prediction. Plain learners report kPlain.
enum class PredictionBranch {
  kPlain,
  kMalformed,       // wrong params or eval returned nothing
  kBootstrap,       // before the first mistake: always 0
  kBelowPositive,   // comparison with the positive anchor is < or =
  kAboveNegative,   // comparison with the negative anchor is > or =
  kOptimistic,      // one anchor, beyond it: predict 1
  kCloserPositive,  // closeness bit 1 between the anchors
  kCloserNegative,  // closeness bit 0 between the anchors
};

std::string_view to_string(LearnerPhase phase);
std::string_view to_string(PredictionBranch branch);

struct Round {
  std::optional<EncExample> example;    // encrypted games
  std::optional<std::uint64_t> plaintext;  // harness-only; empty on invalid
  int prediction = 0;  // -1 when masked from an oblivious adversary
  int label = 0;
  bool mistake = false;
  // |dist(dec c+, dec c-)| after the round, once both anchors exist.
  std::optional<std::int64_t> potential_after;
  LearnerPhase phase = LearnerPhase::kNone;  // phase the prediction came from
  PredictionBranch branch = PredictionBranch::kPlain;
};

struct GameTranscript {
  std::vector<Round> rounds;
  std::size_t total_mistakes = 0;
  std::string learner_name;
  std::string adversary_name;
  std::uint64_t seed = 0;
  int d = 0;
  DistanceKind kind = DistanceKind::kFloorLog;
  std::uint64_t threshold = 0;
  bool stopped_early = false;  // adversary ran out of examples
};

// Columns: round, plaintext, prediction, label, mistake, potential.
void write_transcript_csv(std::ostream& out, const GameTranscript& transcript);

// Learners.

class PlainLearner {
 public:
  virtual ~PlainLearner() = default;
  virtual std::string name() const = 0;
  virtual int predict(std::uint64_t x) const = 0;
  virtual void observe(std::uint64_t x, int label) = 0;
  virtual std::unique_ptr<PlainLearner> clone() const = 0;
};

// Keeps the consistent threshold interval (largest positive, smallest
// negative] and predicts with the upper midpoint of it. Each mistake at
// least halves the interval, so at most d mistakes on [1, 2^d].
class HalvingLearner final : public PlainLearner {
 public:
  explicit HalvingLearner(int d);
  std::string name() const override { return "halving"; }
  int predict(std::uint64_t x) const override;
  void observe(std::uint64_t x, int label) override;
  std::unique_ptr<PlainLearner> clone() const override {
    return std::make_unique<HalvingLearner>(*this);
  }

  std::uint64_t largest_positive() const { return largest_positive_; }
  std::uint64_t smallest_negative() const { return smallest_negative_; }
  std::uint64_t midpoint() const;

 private:
  std::uint64_t largest_positive_ = 0;  // 0: none seen
  std::uint64_t smallest_negative_;     // 2^d until a negative arrives
};

class ConstantPlainLearner final : public PlainLearner {
 public:
  explicit ConstantPlainLearner(int value) : value_(value != 0 ? 1 : 0) {}
  std::string name() const override {
    return value_ ? "constant1" : "constant0";
  }
  int predict(std::uint64_t) const override { return value_; }
  void observe(std::uint64_t, int) override {}
  std::unique_ptr<PlainLearner> clone() const override {
    return std::make_unique<ConstantPlainLearner>(*this);
  }

 private:
  int value_;
};

class EncLearner {
 public:
  virtual ~EncLearner() = default;
  virtual std::string name() const = 0;
  virtual int predict(const EncExample& x) const = 0;
  virtual void observe(const EncExample& x, int label) = 0;
  virtual std::unique_ptr<EncLearner> clone() const = 0;

  virtual LearnerPhase phase() const { return LearnerPhase::kNone; }
  virtual PredictionBranch branch(const EncExample&) const {
    return PredictionBranch::kPlain;
  }
  // Anchor ciphertexts, when the learner keeps them.
  virtual std::optional<CiphertextHandle> positive_anchor() const {
    return std::nullopt;
  }
  virtual std::optional<CiphertextHandle> negative_anchor() const {
    return std::nullopt;
  }
};

// Learner for encrypted thresholds that only touches ciphertexts through
// eval. Bootstrap: predict 0 until the first mistake, which fixes params and
// the positive anchor. One anchor: predict 1 at or below it and also beyond
// it, so the first mistake there supplies the negative anchor. Two anchors:
// bracket by comparisons, otherwise follow the closeness bit and move the
// anchor on the side of the mistake.
class LEncThrLearner final : public EncLearner {
 public:
  explicit LEncThrLearner(const EvalOracle& oracle) : oracle_(&oracle) {}
  std::string name() const override { return "lencthr"; }
  int predict(const EncExample& x) const override;
  void observe(const EncExample& x, int label) override;
  std::unique_ptr<EncLearner> clone() const override {
    return std::make_unique<LEncThrLearner>(*this);
  }

  LearnerPhase phase() const override;
  PredictionBranch branch(const EncExample& x) const override;
  std::optional<CiphertextHandle> positive_anchor() const override {
    return positive_;
  }
  std::optional<CiphertextHandle> negative_anchor() const override {
    return negative_;
  }

 private:
  struct Decision {
    int prediction;
    PredictionBranch branch;
  };
  Decision decide(const EncExample& x) const;

  const EvalOracle* oracle_;
  std::optional<ParamsTag> params_;
  std::optional<CiphertextHandle> positive_;
  std::optional<CiphertextHandle> negative_;
};

class ConstantEncLearner final : public EncLearner {
 public:
  explicit ConstantEncLearner(int value) : value_(value != 0 ? 1 : 0) {}
  std::string name() const override {
    return value_ ? "constant1" : "constant0";
  }
  int predict(const EncExample&) const override { return value_; }
  void observe(const EncExample&, int) override {}
  std::unique_ptr<EncLearner> clone() const override {
    return std::make_unique<ConstantEncLearner>(*this);
  }

 private:
  int value_;
};

// Adversaries.

// What an encrypted-game adversary may use to build examples. It knows the
// concept; it never gets to change it.
struct EncGameContext {
  KeyRegistry* registry = nullptr;
  KeyPair target;   // the concept's key
  KeyPair foreign;  // a second key, for wrong-params examples
  int d = 0;
  DistanceKind kind = DistanceKind::kFloorLog;
  std::uint64_t threshold = 1;
};

class PlainAdversary {
 public:
  virtual ~PlainAdversary() = default;
  virtual std::string name() const = 0;
  // `history` predictions are -1 in oblivious games. nullopt ends the game.
  virtual std::optional<std::uint64_t> next(std::span<const Round> history,
                                            Rng& rng) = 0;
};

class EncAdversary {
 public:
  virtual ~EncAdversary() = default;
  virtual std::string name() const = 0;
  virtual std::optional<EncExample> next(std::span<const Round> history,
                                           Rng& rng) = 0;
};

struct PlainGameSetup {
  int d = 8;
  std::size_t rounds = 1000;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> threshold;  // uniform over [1, 2^d] if unset
  bool oblivious = false;
};

struct EncGameSetup {
  int d = 8;
  DistanceKind kind = DistanceKind::kFloorLog;
  std::size_t rounds = 1000;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> threshold;
  bool oblivious = false;
};

using PlainAdversaryFactory = std::function<std::unique_ptr<PlainAdversary>(
    int d, std::uint64_t threshold, const PlainLearner& learner)>;
using EncLearnerFactory =
    std::function<std::unique_ptr<EncLearner>(const EvalOracle& oracle)>;
using EncAdversaryFactory = std::function<std::unique_ptr<EncAdversary>(
    const EncGameContext& context, const EncLearner& learner)>;

GameTranscript run_plain_game(const PlainGameSetup& setup,
                              PlainLearner& learner,
                              const PlainAdversaryFactory& make_adversary);

GameTranscript run_enc_game(const EncGameSetup& setup,
                            const EncLearnerFactory& make_learner,
                            const EncAdversaryFactory& make_adversary);

}  // namespace leaklab
