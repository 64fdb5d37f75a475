#pragma once

// Privacy calculus and the two reference threshold learners: the
// non-private largest-positive learner and an exponential-mechanism learner
// that needs exact-distance leakage.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leaklab/concepts.hpp"
#include "leaklab/fre_oracle.hpp"
#include "leaklab/rng.hpp"

namespace leaklab {

struct PrivacyParams {
  double epsilon = 0.0;
  double delta = 0.0;

  // Throws kInvalidArgument unless epsilon >= 0 and delta in [0, 1].
  void validate() const;
};

// (e^(k eps) - 1) / (e^eps - 1), with limit k at eps = 0.
double group_delta_factor(double epsilon, std::size_t k);

// Throws kInvalidArgument when k == 0.
PrivacyParams group_privacy(const PrivacyParams& p, std::size_t k);
PrivacyParams compose(const PrivacyParams& a, const PrivacyParams& b);
// ((e^eps - 1) m / n, delta m / n). Throws kPrecondition unless eps <= 1 and
// n >= 2m.
PrivacyParams subsample_amplify(const PrivacyParams& p, std::size_t m,
                                std::size_t n);

// "%.12g"-style rendering used by every JSON report.
double round_significant(double value, int digits = 12);

// Batch learners see only the EvalOracle and labeled ciphertexts.
class BatchLearner {
 public:
  virtual ~BatchLearner() = default;
  virtual std::string name() const = 0;
  virtual std::optional<PrivacyParams> privacy() const { return std::nullopt; }
  virtual std::unique_ptr<Hypothesis> fit(
      const EvalOracle& oracle, std::span<const LabeledExample> examples,
      Rng& rng) const = 0;
};

class ConstantLearner final : public BatchLearner {
 public:
  explicit ConstantLearner(int value) : value_(value != 0 ? 1 : 0) {}
  std::string name() const override {
    return value_ ? "constant1" : "constant0";
  }
  std::unique_ptr<Hypothesis> fit(const EvalOracle&,
                                  std::span<const LabeledExample>,
                                  Rng&) const override {
    return std::make_unique<ConstantHypothesis>(value_);
  }

 private:
  int value_;
};

// Threshold just above the largest positive example: predicts 1 on x with
// the training params, a successful eval, and Comp(x, c*) in {<, =}.
// No positives: 0 everywhere.
class LargestPositiveLearner final : public BatchLearner {
 public:
  std::string name() const override { return "largest-positive"; }
  std::unique_ptr<Hypothesis> fit(const EvalOracle& oracle,
                                  std::span<const LabeledExample> examples,
                                  Rng& rng) const override;
};

// The n + 1 candidate outputs of the exponential mechanism over sorted
// training examples. Interval j (0 <= j <= n) sits between sorted examples
// j and j + 1 (1-based); its hypothesis predicts 1 up to and including
// example j (strictly below example 1 for j = 0).
struct IntervalSelection {
  ParamsTag params;
  std::vector<CiphertextHandle> sorted;
  std::vector<int> labels;          // labels in sorted order
  std::vector<double> lengths;      // size n + 1
  std::vector<std::size_t> errors;  // empirical mistakes per interval
  std::vector<double> probabilities;
};

// Picks an interval with probability proportional to
// length * exp(epsilon * utility / 2), utility = -errors. Interior lengths
// come from exact distances; the residual domain mass is split evenly
// between the two outer intervals. Needs a key with exact-distance leakage
// (kUnsupported otherwise).
class ExpMechThresholdLearner final : public BatchLearner {
 public:
  ExpMechThresholdLearner(double epsilon, int d);
  std::string name() const override { return "expmech"; }
  std::optional<PrivacyParams> privacy() const override {
    return PrivacyParams{epsilon_, 0.0};
  }
  std::unique_ptr<Hypothesis> fit(const EvalOracle& oracle,
                                  std::span<const LabeledExample> examples,
                                  Rng& rng) const override;

  IntervalSelection selection(const EvalOracle& oracle,
                              std::span<const LabeledExample> examples) const;
  static std::size_t sample_interval(const IntervalSelection& sel, Rng& rng);
  static std::unique_ptr<Hypothesis> hypothesis_for(
      const EvalOracle& oracle, const IntervalSelection& sel,
      std::size_t interval);

 private:
  double epsilon_;
  int d_;
};

// Looks up "largest-positive", "expmech", "constant0", "constant1".
std::unique_ptr<BatchLearner> make_batch_learner(const std::string& name,
                                                 double epsilon, int d);

struct AccuracySetup {
  int d = 20;
  DistanceKind kind = DistanceKind::kFloorLog;
  std::uint64_t threshold = 1;
  std::size_t n = 64;
  std::size_t trials = 100;
  std::size_t mc_samples = 2000;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct AccuracyReport {
  std::vector<double> errors;  // per trial, trial order

  double quantile(double q) const;
  double median() const { return quantile(0.5); }
  // Fraction of trials with error <= alpha.
  double fraction_within(double alpha) const;
};

// Receives the harness-side registry and key, so reference stubs may decrypt.
using TrainFn = std::function<std::unique_ptr<Hypothesis>(
    const KeyRegistry& registry, const KeyPair& keys, const Dataset& data,
    Rng& rng)>;

AccuracyReport accuracy_harness(const AccuracySetup& setup,
                                const TrainFn& train);
AccuracyReport accuracy_harness(const AccuracySetup& setup,
                                const BatchLearner& learner);

}  // namespace leaklab
