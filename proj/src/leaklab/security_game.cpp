#include "leaklab/security_game.hpp"

#include <cmath>
#include <cstdlib>

#include "leaklab/errors.hpp"

namespace leaklab {

namespace {

// Pairwise comparison and |dist| tables for one side; the leak of any index
// triple is assembled from these.
struct PairTables {
  std::size_t q;
  std::vector<Comparison> cmp;
  std::vector<std::int64_t> mag;

  PairTables(const std::vector<std::uint64_t>& xs, DistanceKind kind)
      : q(xs.size()), cmp(q * q), mag(q * q) {
    for (std::size_t a = 0; a < q; ++a)
      for (std::size_t b = 0; b < q; ++b) {
        cmp[a * q + b] = compare(xs[a], xs[b]);
        mag[a * q + b] = std::llabs(distance(kind, xs[a], xs[b]));
      }
  }

  LeakOutput at(const std::vector<std::uint64_t>& xs, std::size_t i,
                std::size_t j, std::size_t k) const {
    std::size_t s0 = i, s1 = j, s2 = k;
    if (xs[s0] > xs[s1]) std::swap(s0, s1);
    if (xs[s1] > xs[s2]) std::swap(s1, s2);
    if (xs[s0] > xs[s1]) std::swap(s0, s1);
    return LeakOutput{cmp[i * q + j], cmp[j * q + k], cmp[i * q + k],
                      static_cast<std::uint8_t>(
                          mag[s0 * q + s1] < mag[s1 * q + s2] ? 1 : 0)};
  }
};

}  // namespace

ValidationResult validate_submission(const ChallengeSubmission& sub,
                                     DistanceKind kind, int d) {
  ValidationResult result;
  if (sub.left.size() != sub.right.size() || sub.left.empty()) {
    result.status = ValidationResult::Status::kLengthMismatch;
    return result;
  }
  if (d > 0) {
    const std::uint64_t top = domain_size(d);
    for (const auto* side : {&sub.left, &sub.right})
      for (std::uint64_t m : *side)
        if (m < 1 || m > top) {
          result.status = ValidationResult::Status::kOutOfRange;
          return result;
        }
  }
  const PairTables left(sub.left, kind);
  const PairTables right(sub.right, kind);
  const std::size_t q = sub.left.size();
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j)
      for (std::size_t k = 0; k < q; ++k) {
        if (left.at(sub.left, i, j, k) != right.at(sub.right, i, j, k)) {
          result.status = ValidationResult::Status::kLeakMismatch;
          result.triple = {i + 1, j + 1, k + 1};
          return result;
        }
      }
  return result;
}

AdvantageEstimate estimate_advantage(std::span<const TrialOutcome> outcomes) {
  AdvantageEstimate est;
  std::size_t ones_left = 0, ones_right = 0, correct = 0;
  for (const auto& o : outcomes) {
    ++est.trials;
    if (!o.valid) ++est.invalid;
    if (o.output == o.b) ++correct;
    if (o.b == 0) {
      ++est.trials_left;
      ones_left += o.output == 1;
    } else {
      ++est.trials_right;
      ones_right += o.output == 1;
    }
  }
  if (est.trials == 0) return est;
  est.correct_rate = static_cast<double>(correct) / est.trials;
  if (est.trials_left > 0)
    est.p_left = static_cast<double>(ones_left) / est.trials_left;
  if (est.trials_right > 0)
    est.p_right = static_cast<double>(ones_right) / est.trials_right;
  est.advantage = std::fabs(est.p_left - est.p_right);
  if (est.trials_left > 0 && est.trials_right > 0) {
    const double pooled =
        static_cast<double>(ones_left + ones_right) / est.trials;
    est.sigma = std::sqrt(pooled * (1.0 - pooled) *
                          (1.0 / est.trials_left + 1.0 / est.trials_right));
    est.ci_halfwidth = 1.96 * est.sigma;
  }
  return est;
}

SecurityGameResult run_security_game(const GameSetup& setup,
                                     const AdversaryFactory& make_adversary) {
  check_bit_width(setup.d);
  if (setup.trials < 1) {
    throw Error(ErrorCode::kInvalidArgument, "security game needs trials >= 1");
  }
  SecurityGameResult result;
  result.outcomes = run_trials<TrialOutcome>(
      setup.trials, setup.seed, setup.jobs,
      [&](std::size_t trial, Rng& rng) {
        TrialOutcome outcome;
        auto adversary = make_adversary(trial);
        const ChallengeSubmission sub = adversary->submit(rng);
        outcome.validation = validate_submission(sub, setup.kind, setup.d);
        outcome.valid = outcome.validation.valid();
        outcome.b = fair_bit(rng);
        if (!outcome.valid) {
          outcome.output = fair_bit(rng);
          return outcome;
        }
        KeyRegistry registry(rng());
        const KeyPair keys = registry.gen(setup.d, setup.kind, rng());
        const auto& messages = outcome.b == 0 ? sub.left : sub.right;
        std::vector<CiphertextHandle> cts;
        cts.reserve(messages.size());
        for (std::uint64_t m : messages) cts.push_back(registry.enc(keys.sk, m));
        outcome.output =
            adversary->guess(registry, keys.params, cts, rng) != 0 ? 1 : 0;
        return outcome;
      });
  result.estimate = estimate_advantage(result.outcomes);
  return result;
}

}  // namespace leaklab
