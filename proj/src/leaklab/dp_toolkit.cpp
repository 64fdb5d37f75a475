#include "leaklab/dp_toolkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "leaklab/errors.hpp"

namespace leaklab {

void PrivacyParams::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be finite and >= 0");
  }
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must be in [0, 1]");
  }
}

double group_delta_factor(double epsilon, std::size_t k) {
  if (epsilon == 0.0) return static_cast<double>(k);
  return std::expm1(static_cast<double>(k) * epsilon) / std::expm1(epsilon);
}

PrivacyParams group_privacy(const PrivacyParams& p, std::size_t k) {
  p.validate();
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "group size k must be >= 1");
  return PrivacyParams{static_cast<double>(k) * p.epsilon,
                       p.delta * group_delta_factor(p.epsilon, k)};
}

PrivacyParams compose(const PrivacyParams& a, const PrivacyParams& b) {
  a.validate();
  b.validate();
  return PrivacyParams{a.epsilon + b.epsilon, a.delta + b.delta};
}

PrivacyParams subsample_amplify(const PrivacyParams& p, std::size_t m,
                                std::size_t n) {
  p.validate();
  if (p.epsilon > 1.0) {
    throw Error(ErrorCode::kPrecondition, "subsampling needs epsilon <= 1");
  }
  if (m == 0 || n < 2 * m) {
    throw Error(ErrorCode::kPrecondition,
                "subsampling needs 1 <= m and n >= 2m, got m = " +
                    std::to_string(m) + ", n = " + std::to_string(n));
  }
  const double ratio = static_cast<double>(m) / static_cast<double>(n);
  return PrivacyParams{std::expm1(p.epsilon) * ratio, p.delta * ratio};
}

double round_significant(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

// LargestPositiveLearner

std::unique_ptr<Hypothesis> LargestPositiveLearner::fit(
    const EvalOracle& oracle, std::span<const LabeledExample> examples,
    Rng&) const {
  if (examples.empty()) return std::make_unique<ConstantHypothesis>(0);
  const ParamsTag params = examples.front().example.params;
  std::optional<CiphertextHandle> best;
  for (const auto& ex : examples) {
    if (ex.label != 1 || ex.example.params != params) continue;
    if (!best) {
      if (oracle.compare(params, ex.example.ciphertext, ex.example.ciphertext))
        best = ex.example.ciphertext;
      continue;
    }
    const auto c = oracle.compare(params, ex.example.ciphertext, *best);
    if (c && *c == Comparison::kGreater) best = ex.example.ciphertext;
  }
  return std::make_unique<AnchorThresholdHypothesis>(oracle, params, best,
                                                     /*inclusive=*/true);
}

// ExpMechThresholdLearner

ExpMechThresholdLearner::ExpMechThresholdLearner(double epsilon, int d)
    : epsilon_(epsilon), d_(d) {
  PrivacyParams{epsilon, 0.0}.validate();
  check_bit_width(d);
}

IntervalSelection ExpMechThresholdLearner::selection(
    const EvalOracle& oracle, std::span<const LabeledExample> examples) const {
  if (examples.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "expmech needs at least one example");
  }
  IntervalSelection sel;
  sel.params = examples.front().example.params;
  std::vector<const LabeledExample*> usable;
  for (const auto& ex : examples) {
    if (ex.example.params != sel.params) continue;
    if (!oracle.exact_distance(sel.params, ex.example.ciphertext,
                               ex.example.ciphertext)) {
      continue;
    }
    usable.push_back(&ex);
  }
  if (usable.empty()) {
    throw Error(ErrorCode::kUnsupported,
                "expmech needs exact-distance leakage on the training key");
  }
  std::stable_sort(usable.begin(), usable.end(),
                   [&](const LabeledExample* a, const LabeledExample* b) {
                     return oracle.compare(sel.params, a->example.ciphertext,
                                           b->example.ciphertext) ==
                            Comparison::kLess;
                   });
  const std::size_t n = usable.size();
  std::vector<double> pos(n);
  for (std::size_t j = 0; j < n; ++j) {
    sel.sorted.push_back(usable[j]->example.ciphertext);
    sel.labels.push_back(usable[j]->label);
    pos[j] = static_cast<double>(*oracle.exact_distance(
        sel.params, usable[j]->example.ciphertext, usable[0]->example.ciphertext));
  }
  const double domain = static_cast<double>(domain_size(d_));
  const double outer = (domain - (pos[n - 1] - pos[0])) / 2.0;
  sel.lengths.assign(n + 1, 0.0);
  sel.lengths[0] = outer;
  sel.lengths[n] = outer;
  for (std::size_t j = 1; j < n; ++j) sel.lengths[j] = pos[j] - pos[j - 1];

  // errors[j] = negatives among the first j + positives after them.
  std::size_t positives_after = static_cast<std::size_t>(
      std::count(sel.labels.begin(), sel.labels.end(), 1));
  std::size_t negatives_before = 0;
  sel.errors.resize(n + 1);
  sel.errors[0] = positives_after;
  for (std::size_t j = 1; j <= n; ++j) {
    if (sel.labels[j - 1] == 1) {
      --positives_after;
    } else {
      ++negatives_before;
    }
    sel.errors[j] = negatives_before + positives_after;
  }

  std::vector<double> log_w(n + 1, -std::numeric_limits<double>::infinity());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j <= n; ++j) {
    if (sel.lengths[j] <= 0.0) continue;
    log_w[j] = std::log(sel.lengths[j]) -
               epsilon_ * static_cast<double>(sel.errors[j]) / 2.0;
    top = std::max(top, log_w[j]);
  }
  sel.probabilities.assign(n + 1, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    if (std::isinf(log_w[j])) continue;
    sel.probabilities[j] = std::exp(log_w[j] - top);
    total += sel.probabilities[j];
  }
  for (double& p : sel.probabilities) p /= total;
  return sel;
}

std::size_t ExpMechThresholdLearner::sample_interval(const IntervalSelection& sel,
                                                     Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t j = 0; j < sel.probabilities.size(); ++j) {
    if (sel.probabilities[j] <= 0.0) continue;
    acc += sel.probabilities[j];
    last = j;
    if (u < acc) return j;
  }
  return last;
}

std::unique_ptr<Hypothesis> ExpMechThresholdLearner::hypothesis_for(
    const EvalOracle& oracle, const IntervalSelection& sel,
    std::size_t interval) {
  if (interval == 0) {
    return std::make_unique<AnchorThresholdHypothesis>(
        oracle, sel.params, sel.sorted.front(), /*inclusive=*/false);
  }
  return std::make_unique<AnchorThresholdHypothesis>(
      oracle, sel.params, sel.sorted[interval - 1], /*inclusive=*/true);
}

std::unique_ptr<Hypothesis> ExpMechThresholdLearner::fit(
    const EvalOracle& oracle, std::span<const LabeledExample> examples,
    Rng& rng) const {
  const IntervalSelection sel = selection(oracle, examples);
  return hypothesis_for(oracle, sel, sample_interval(sel, rng));
}

std::unique_ptr<BatchLearner> make_batch_learner(const std::string& name,
                                                 double epsilon, int d) {
  if (name == "largest-positive") return std::make_unique<LargestPositiveLearner>();
  if (name == "expmech") return std::make_unique<ExpMechThresholdLearner>(epsilon, d);
  if (name == "constant0") return std::make_unique<ConstantLearner>(0);
  if (name == "constant1") return std::make_unique<ConstantLearner>(1);
  throw Error(ErrorCode::kInvalidArgument, "unknown learner '" + name + "'");
}

// Accuracy harness

double AccuracyReport::quantile(double q) const {
  if (errors.empty()) return 0.0;
  std::vector<double> sorted = errors;
  std::sort(sorted.begin(), sorted.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

double AccuracyReport::fraction_within(double alpha) const {
  if (errors.empty()) return 0.0;
  const auto hits = std::count_if(errors.begin(), errors.end(),
                                  [alpha](double e) { return e <= alpha; });
  return static_cast<double>(hits) / static_cast<double>(errors.size());
}

AccuracyReport accuracy_harness(const AccuracySetup& setup,
                                const TrainFn& train) {
  check_bit_width(setup.d);
  if (setup.trials == 0 || setup.n == 0 || setup.mc_samples == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "accuracy harness needs trials, n, mc_samples >= 1");
  }
  AccuracyReport report;
  report.errors = run_trials<double>(
      setup.trials, setup.seed, setup.jobs, [&](std::size_t, Rng& rng) {
        KeyRegistry registry(rng());
        const KeyPair keys = registry.gen(setup.d, setup.kind, rng());
        const Dataset data =
            sample_sorted_dataset(registry, keys, setup.threshold, setup.n, rng);
        const auto h = train(registry, keys, data, rng);
        return generalization_error(registry, keys, setup.threshold, *h,
                                    setup.mc_samples, rng());
      });
  return report;
}

AccuracyReport accuracy_harness(const AccuracySetup& setup,
                                const BatchLearner& learner) {
  return accuracy_harness(
      setup, [&learner](const KeyRegistry& registry, const KeyPair&,
                        const Dataset& data, Rng& rng) {
        return learner.fit(registry, data.examples, rng);
      });
}

}  // namespace leaklab
