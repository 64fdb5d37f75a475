#pragma once

// Monte Carlo verifiers for the sampling lemmas behind the attack. Each
// report carries an empirical success rate, a normal-approximation CI and a
// one-sided verdict against the claimed lower bound.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "leaklab/attack.hpp"
#include "leaklab/rng.hpp"

namespace leaklab {

enum class Verdict { kConsistent, kViolated };
std::string_view to_string(Verdict v);

struct Violation {
  std::size_t trial = 0;
  std::size_t i = 0;       // sample index (0 when not index-specific)
  std::uint64_t y = 0;     // offending point, when there is one
  std::string detail;
};

struct ConditionRate {
  std::string name;
  std::size_t success = 0;
  double rate = 0.0;
  double ci = 0.0;
  std::optional<double> claimed;
};

struct LemmaReport {
  std::string lemma;
  std::size_t n = 0;
  int d = 0;
  std::size_t trials = 0;
  std::size_t success = 0;
  double rate = 0.0;
  double ci = 0.0;  // 1.96 sqrt(rate (1 - rate) / trials)
  std::optional<double> claimed;
  Verdict verdict = Verdict::kConsistent;
  double observed_max = 0.0;     // largest statistic seen (sizes, lengths)
  bool diagnostic_only = false;  // the small-n precondition does not hold
  std::optional<Violation> first_violation;
  std::vector<ConditionRate> conditions;  // per-condition breakdown
  std::vector<std::uint8_t> per_trial;    // 1 = success
};

// kConsistent unless claimed is set and rate + ci < claimed.
Verdict lemma_verdict(double rate, double ci, std::optional<double> claimed);

// Sorted sample of n points from [1, 2^d]. Default: i.i.d. uniform.
using Sampler =
    std::function<std::vector<std::uint64_t>(std::size_t n, int d, Rng& rng)>;
std::vector<std::uint64_t> uniform_sorted_sample(std::size_t n, int d, Rng& rng);

struct LemmaSetup {
  std::size_t n = 128;
  int d = 40;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::optional<double> claimed;  // overrides the lemma's own bound
  Sampler sampler;                // empty: uniform
};

// Every A_i intersected with the sample has at most removal_budget(n)
// points. Claimed 1 - 1/n.
LemmaReport verify_regularity(const LemmaSetup& setup);

// Every bucket, sentinels included, is at most guard_band(n, d) long.
// Claimed 1 - 1/n.
LemmaReport verify_bucket_sizes(const LemmaSetup& setup);

// For every i in [2, n-1] the A_i removal set fits the budget and every
// surviving y has fld(y, m_{i-1}) = fld(y, m_{i+1}). Claimed 1 - 2/n.
// `guard` replaces the guard band (0 is the negative control).
LemmaReport verify_fldspread(const LemmaSetup& setup,
                             std::optional<double> guard = std::nullopt);

// With A_i removal sets, for every i in [2, n-1]: condition 1 (the leakage of
// any two survivors with one interval point does not depend on the point)
// and condition 2 (the leakage of any survivor with an ascending interval
// pair does not depend on the pair), probed with `probe_pairs` pairs.
// The top-level rate is condition 1 (claimed 1 - 2/n); condition 2 is
// reported without a claim.
LemmaReport verify_log_invariance(const LemmaSetup& setup,
                                  std::size_t probe_pairs);

}  // namespace leaklab
