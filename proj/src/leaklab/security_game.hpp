#pragma once

// Static-security challenger for the ideal FRE. The adversary commits to two
// message sequences up front, receives encryptions of one of them under a
// fresh key, and outputs a bit.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "leaklab/fre_oracle.hpp"
#include "leaklab/leakage.hpp"
#include "leaklab/rng.hpp"

namespace leaklab {

struct ChallengeSubmission {
  std::vector<std::uint64_t> left;
  std::vector<std::uint64_t> right;
};

struct ValidationResult {
  enum class Status { kValid, kLeakMismatch, kLengthMismatch, kOutOfRange };

  Status status = Status::kValid;
  // 1-based (i, j, k) of the first violating index triple in lexicographic
  // order; (0, 0, 0) for the length/range sentinels.
  std::array<std::size_t, 3> triple{0, 0, 0};

  bool valid() const { return status == Status::kValid; }
};

// Compares leak on all q^3 ordered index triples, repeats included.
// `d` bounds the message range; pass 0 to skip the range check.
ValidationResult validate_submission(const ChallengeSubmission& sub,
                                     DistanceKind kind, int d = 0);

class StaticAdversary {
 public:
  virtual ~StaticAdversary() = default;

  virtual ChallengeSubmission submit(Rng& rng) = 0;

  // Ciphertexts arrive in submission order.
  virtual int guess(const EvalOracle& oracle, const ParamsTag& params,
                    std::span<const CiphertextHandle> ciphertexts,
                    Rng& rng) = 0;
};

// Called once per trial; each trial owns its adversary instance.
using AdversaryFactory =
    std::function<std::unique_ptr<StaticAdversary>(std::size_t trial)>;

struct GameSetup {
  int d = 8;
  DistanceKind kind = DistanceKind::kFloorLog;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct TrialOutcome {
  int b = 0;
  int output = 0;
  bool valid = true;
  ValidationResult validation;
};

struct AdvantageEstimate {
  double advantage = 0.0;  // |Pr[out=1 | b=0] - Pr[out=1 | b=1]|
  double p_left = 0.0;     // Pr[out=1 | b=0]
  double p_right = 0.0;    // Pr[out=1 | b=1]
  double sigma = 0.0;      // sqrt(p(1-p)(1/nL + 1/nR)), pooled p
  double ci_halfwidth = 0.0;
  std::size_t trials = 0;
  std::size_t trials_left = 0;
  std::size_t trials_right = 0;
  std::size_t invalid = 0;
  double correct_rate = 0.0;  // Pr[out == b]
};

AdvantageEstimate estimate_advantage(std::span<const TrialOutcome> outcomes);

struct SecurityGameResult {
  AdvantageEstimate estimate;
  std::vector<TrialOutcome> outcomes;
};

// Invalid submissions do not abort: the trial records a uniform random
// output and a validation flag.
SecurityGameResult run_security_game(const GameSetup& setup,
                                     const AdversaryFactory& make_adversary);

}  // namespace leaklab
