#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "leaklab/online_game.hpp"

namespace leaklab {

class RandomPlainAdversary final : public PlainAdversary {
 public:
  explicit RandomPlainAdversary(int d) : top_(domain_size(d)) {}
  std::string name() const override { return "random"; }
  std::optional<std::uint64_t> next(std::span<const Round> history,
                                    Rng& rng) override;

 private:
  std::uint64_t top_;
};

// Replays the game on a private copy of the learner and, each round, looks
// for a point the copy gets wrong: a binary search for the prediction
// boundary (predictions are assumed monotone), its neighbours, and the
// concept boundary. Falls back to an unseen uniform point.
class AdaptivePlainAdversary final : public PlainAdversary {
 public:
  AdaptivePlainAdversary(const PlainLearner& learner, int d,
                         std::uint64_t threshold);
  std::string name() const override { return "adaptive"; }
  std::optional<std::uint64_t> next(std::span<const Round> history,
                                    Rng& rng) override;

 private:
  int label(std::uint64_t x) const { return x < threshold_ ? 1 : 0; }

  std::unique_ptr<PlainLearner> shadow_;
  std::uint64_t top_;
  std::uint64_t threshold_;
  std::size_t replayed_ = 0;
  bool exhausted_ = false;  // last search failed and nothing changed since
  std::unordered_set<std::uint64_t> seen_;
};

// 80% fresh uniform encryptions, 10% forged nonces, 10% wrong params.
class RandomEncAdversary final : public EncAdversary {
 public:
  explicit RandomEncAdversary(const EncGameContext& context)
      : context_(context) {}
  std::string name() const override { return "random"; }
  std::optional<EncExample> next(std::span<const Round> history,
                                 Rng& rng) override;

 private:
  EncGameContext context_;
};

class AdaptiveEncAdversary final : public EncAdversary {
 public:
  AdaptiveEncAdversary(const EncGameContext& context,
                       const EncLearner& learner);
  std::string name() const override { return "adaptive"; }
  std::optional<EncExample> next(std::span<const Round> history,
                                 Rng& rng) override;

 private:
  int label(std::uint64_t x) const { return x < context_.threshold ? 1 : 0; }
  // One ciphertext per plaintext, so probes do not grow the key's table.
  EncExample encrypt(std::uint64_t m);
  int predict(std::uint64_t m) { return shadow_->predict(encrypt(m)); }

  EncGameContext context_;
  std::unique_ptr<EncLearner> shadow_;
  std::vector<EncExample> malformed_probes_;
  std::size_t replayed_ = 0;
  bool exhausted_ = false;
  std::unordered_map<std::uint64_t, EncExample> cache_;
  std::unordered_set<std::uint64_t> presented_;
};

struct SymmetryStats {
  std::size_t rounds_checked = 0;
  std::size_t asymmetric_rounds = 0;
  std::optional<std::size_t> first_asymmetric_round;  // 1-based
};

// Concept at 2^(d-1). Keeps the largest positive g and smallest negative s
// presented so far (sentinels 0 and 2^d + 1) and each round presents g + 1 or
// s - 1 on a fair coin. Stops when no unseen point remains between them.
//
// Before each choice it checks that both candidates produce the same leakage
// against the history: comparisons against every history point, closeness
// bits against nearby and randomly sampled history pairs.
class OreBreakerAdversary final : public EncAdversary {
 public:
  OreBreakerAdversary(const EncGameContext& context, SymmetryStats* stats);
  std::string name() const override { return "ore-breaker"; }
  std::optional<EncExample> next(std::span<const Round> history,
                                 Rng& rng) override;

  static constexpr std::size_t kNeighbourPoints = 8;
  static constexpr std::size_t kRandomPairs = 64;

 private:
  bool candidates_symmetric(std::uint64_t a, std::uint64_t b, Rng& rng) const;

  EncGameContext context_;
  SymmetryStats* stats_;
  std::uint64_t largest_positive_ = 0;
  std::uint64_t smallest_negative_;
  // Presented plaintexts below and above the gap, in presentation order
  // (so each is sorted away from the gap).
  std::vector<std::uint64_t> positives_;
  std::vector<std::uint64_t> negatives_;
};

// Name lookup for configs: "random", "adaptive" (plain and encrypted) and
// "ore-breaker" (encrypted only). Throws kInvalidArgument on unknown names.
PlainAdversaryFactory plain_adversary_factory(std::string_view name);
EncAdversaryFactory enc_adversary_factory(std::string_view name,
                                          SymmetryStats* stats = nullptr);

}  // namespace leaklab
