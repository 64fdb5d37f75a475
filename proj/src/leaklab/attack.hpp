#pragma once

// The reduction from an accurate threshold learner to a static-security
// adversary, with the bucket and removal-set machinery it relies on.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "leaklab/dp_toolkit.hpp"
#include "leaklab/security_game.hpp"

namespace leaklab {

// Sorted samples m_1..m_n with sentinels m_0 = 0 and m_{n+1} = 2^d.
class BucketStructure {
 public:
  // Throws kInvalidArgument on unsorted input or an empty sample,
  // kOutOfRange on values outside [1, 2^d].
  BucketStructure(std::vector<std::uint64_t> sorted, int d);

  std::size_t n() const { return points_.size() - 2; }
  int d() const { return d_; }
  // 0 <= i <= n + 1.
  std::uint64_t point(std::size_t i) const { return points_.at(i); }
  // Length of [m_i, m_{i+1}) for 0 <= i <= n.
  std::uint64_t bucket_length(std::size_t i) const {
    return points_.at(i + 1) - points_.at(i);
  }
  // m_1..m_n.
  std::vector<std::uint64_t> samples() const {
    return {points_.begin() + 1, points_.end() - 1};
  }

 private:
  std::vector<std::uint64_t> points_;
  int d_;
};

// ceil(50 log2(n)^2).
std::size_t removal_budget(std::size_t n);
// 4 log2(n) 2^d / n.
double guard_band(std::size_t n, int d);

enum class RemovalConstruction { kAiIntersection, kDirect };

struct RemovalSet {
  RemovalConstruction construction = RemovalConstruction::kDirect;
  std::vector<std::size_t> indices;  // 1-based sample indices, ascending
  bool aborted = false;              // indices.size() > removal_budget(n)
  // Direct construction only: which indices failed the endpoint fld check
  // (the rest failed only the closeness-bit probes or are i itself).
  std::vector<std::size_t> fld_indices;
};

// {j : ||m_j - m_i| - 2^z| <= guard for some 0 <= z < d}. 1 <= i <= n.
RemovalSet removal_set_ai(const BucketStructure& s, std::size_t i, double guard);
RemovalSet removal_set_ai(const BucketStructure& s, std::size_t i);

// Probe pairs inside (m_{i-1}, m_{i+1}): adjacent pairs at both ends and
// around m_i, and the two pairs spanning the widest gaps.
std::vector<std::array<std::uint64_t, 2>> interval_probe_pairs(
    const BucketStructure& s, std::size_t i);

// Removes i, every j whose fld to the two interval endpoints differs, and
// every j whose leakage against the probe pairs is not constant. Any pair of
// points inside (m_{i-1}, m_{i+1}) is then interchangeable for the survivors.
// 2 <= i <= n - 1.
RemovalSet removal_set_direct(const BucketStructure& s, std::size_t i,
                              DistanceKind kind = DistanceKind::kFloorLog);

struct ChallengePlan {
  std::size_t i = 0;
  std::array<std::uint64_t, 2> left{};   // both in one of the two buckets
  std::array<std::uint64_t, 2> right{};  // one in each bucket
  bool left_in_lower = true;             // left pair in the lower bucket
  std::vector<std::uint64_t> context;    // surviving samples, sorted
};

inline constexpr int kPlanRetries = 32;

// Lower region [m_{i-1} + 1, m_i - 1], upper region [m_i, m_{i+1} - 1].
// nullopt when no feasible pair turns up within kPlanRetries draws.
std::optional<ChallengePlan> build_challenge_plan(const BucketStructure& s,
                                                  std::size_t i,
                                                  const RemovalSet& removal,
                                                  Rng& rng);

struct AttackSetup {
  std::size_t n = 16;
  int d = 24;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  DistanceKind kind = DistanceKind::kFloorLog;
  // i = index of the smallest sample >= 2^(d-1), clamped to [2, n-1].
  bool focused = false;
  RemovalConstruction removal = RemovalConstruction::kDirect;
};

struct AttackTrialLog {
  std::size_t trial = 0;
  std::size_t i = 0;
  bool aborted = false;
  std::size_t removal_size = 0;
  int b = 0;
  int guess = 0;
  bool valid = true;
  bool agreed = false;       // the hypothesis agreed on the challenge pair
  double p_hat_agree = 0.0;  // running rate of agreement over non-aborted
};

struct AttackResult {
  AdvantageEstimate estimate;
  std::vector<AttackTrialLog> logs;
  std::size_t aborted = 0;
  std::size_t invalid_non_aborted = 0;
  double abort_rate = 0.0;
};

AttackResult run_attack(const AttackSetup& setup, const BatchLearner& learner);

// Empirical Pr[guess = b] of the agree/disagree rule with Bernoulli
// hypotheses of bias p_i (lower bucket) and p_next (upper bucket), and the
// closed form (1 + (p_i - p_next)^2) / 2.
struct IdentityCheck {
  double empirical = 0.0;
  double analytic = 0.0;
  std::size_t trials = 0;
};
IdentityCheck advantage_identity_check(double p_i, double p_next,
                                       std::size_t trials, std::uint64_t seed);

// Bucket masses: lengths[j] for j != split, and the split bucket's two
// halves below_split / above_split.
struct JumpInstance {
  std::vector<double> p;
  std::vector<double> lengths;
  std::size_t split = 0;  // 0-based
  double below_split = 0.0;
  double above_split = 0.0;
};

struct JumpCheck {
  bool precondition = false;  // accuracy >= 3/4
  bool implied = true;        // false only for a counterexample
  double accuracy = 0.0;
  double max_gap = 0.0;
};

// Throws kInvalidArgument unless both halves sum to 1/2 (within 1e-9) and
// all inputs are in range.
JumpCheck jump_core_check(const JumpInstance& instance);

struct JumpSearch {
  std::size_t generated = 0;
  std::size_t feasible = 0;  // instances meeting the accuracy precondition
  std::size_t counterexamples = 0;
  std::optional<JumpInstance> first_counterexample;
};

// Draws random instances until `feasible_target` meet the precondition.
JumpSearch jump_core_search(std::size_t n, std::size_t feasible_target,
                            std::uint64_t seed);

// max(0, (base - delta * group_delta_factor(eps, k)) * e^(-k eps)).
double group_privacy_advantage_floor(double base_prob, double epsilon,
                                     double delta, std::size_t k);

}  // namespace leaklab
