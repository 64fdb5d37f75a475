#include "leaklab/attack.hpp"

#include <algorithm>
#include <cmath>

#include "leaklab/errors.hpp"

namespace leaklab {

BucketStructure::BucketStructure(std::vector<std::uint64_t> sorted, int d)
    : d_(d) {
  check_bit_width(d);
  if (sorted.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "bucket structure needs n >= 1");
  }
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    throw Error(ErrorCode::kInvalidArgument, "bucket input must be sorted");
  }
  if (sorted.front() < 1 || sorted.back() > domain_size(d)) {
    throw Error(ErrorCode::kOutOfRange, "bucket input outside [1, 2^d]");
  }
  points_.reserve(sorted.size() + 2);
  points_.push_back(0);
  points_.insert(points_.end(), sorted.begin(), sorted.end());
  points_.push_back(domain_size(d));
}

std::size_t removal_budget(std::size_t n) {
  const double lg = std::log2(static_cast<double>(n));
  return static_cast<std::size_t>(std::ceil(50.0 * lg * lg));
}

double guard_band(std::size_t n, int d) {
  return 4.0 * std::log2(static_cast<double>(n)) *
         static_cast<double>(domain_size(d)) / static_cast<double>(n);
}

namespace {

void check_index(const BucketStructure& s, std::size_t i, std::size_t lo,
                 std::size_t hi) {
  if (i < lo || i > hi) {
    throw Error(ErrorCode::kOutOfRange,
                "index " + std::to_string(i) + " outside [" +
                    std::to_string(lo) + ", " + std::to_string(hi) +
                    "] for n = " + std::to_string(s.n()));
  }
}

void finish(RemovalSet& r, std::size_t n) {
  std::sort(r.indices.begin(), r.indices.end());
  r.indices.erase(std::unique(r.indices.begin(), r.indices.end()),
                  r.indices.end());
  r.aborted = r.indices.size() > removal_budget(n);
}

}  // namespace

RemovalSet removal_set_ai(const BucketStructure& s, std::size_t i,
                          double guard) {
  check_index(s, i, 1, s.n());
  if (!(guard >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "guard band must be >= 0");
  }
  RemovalSet r;
  r.construction = RemovalConstruction::kAiIntersection;
  const std::vector<std::uint64_t> pts = s.samples();
  // The gaps are integers, so comparing against floor(guard) is exact.
  const long double g = std::floor(static_cast<long double>(guard));
  const long double mi = static_cast<long double>(s.point(i));
  for (int z = 0; z < s.d(); ++z) {
    const long double p = std::ldexp(1.0L, z);
    for (const long double center : {mi - p, mi + p}) {
      const long double lo_f = std::max(center - g, 1.0L);
      const long double hi_f = std::min(center + g, static_cast<long double>(
                                                        domain_size(s.d())));
      if (lo_f > hi_f) continue;
      const auto lo = static_cast<std::uint64_t>(std::ceil(lo_f));
      const auto hi = static_cast<std::uint64_t>(std::floor(hi_f));
      auto first = std::lower_bound(pts.begin(), pts.end(), lo);
      auto last = std::upper_bound(pts.begin(), pts.end(), hi);
      for (auto it = first; it < last; ++it) {
        r.indices.push_back(static_cast<std::size_t>(it - pts.begin()) + 1);
      }
    }
  }
  finish(r, s.n());
  return r;
}

RemovalSet removal_set_ai(const BucketStructure& s, std::size_t i) {
  return removal_set_ai(s, i, guard_band(s.n(), s.d()));
}

std::vector<std::array<std::uint64_t, 2>> interval_probe_pairs(
    const BucketStructure& s, std::size_t i) {
  check_index(s, i, 1, s.n());
  const std::uint64_t lo = s.point(i - 1) + 1;
  const std::uint64_t hi = s.point(i + 1) - 1;
  const std::uint64_t mi = s.point(i);
  std::vector<std::array<std::uint64_t, 2>> out;
  auto add = [&](std::uint64_t a, std::uint64_t b) {
    // Unsigned wrap-around on small values lands outside [lo, hi].
    if (a >= lo && b <= hi && a < b) {
      const std::array<std::uint64_t, 2> pair{a, b};
      if (std::find(out.begin(), out.end(), pair) == out.end()) {
        out.push_back(pair);
      }
    }
  };
  add(lo, lo + 1);
  add(mi - 2, mi - 1);
  add(mi, mi + 1);
  add(hi - 1, hi);
  add(lo, hi);
  add(mi - 1, mi);
  return out;
}

RemovalSet removal_set_direct(const BucketStructure& s, std::size_t i,
                              DistanceKind kind) {
  check_index(s, i, 2, s.n() - 1);
  RemovalSet r;
  r.construction = RemovalConstruction::kDirect;
  const std::uint64_t lo = s.point(i - 1) + 1;
  const std::uint64_t hi = s.point(i + 1) - 1;
  const auto probes = interval_probe_pairs(s, i);

  auto leak_profile = [&](std::uint64_t m, const std::array<std::uint64_t, 2>& z) {
    const std::array<std::uint64_t, 3> v{m, z[0], z[1]};
    std::array<LeakOutput, 27> out;
    std::size_t k = 0;
    for (auto a : v)
      for (auto b : v)
        for (auto c : v) out[k++] = leak(kind, a, b, c);
    return out;
  };

  for (std::size_t j = 1; j <= s.n(); ++j) {
    if (j == i) {
      r.indices.push_back(j);
      continue;
    }
    const std::uint64_t m = s.point(j);
    const bool inside = lo <= m && m <= hi;
    if (inside || distance(kind, m, lo) != distance(kind, m, hi)) {
      r.indices.push_back(j);
      r.fld_indices.push_back(j);
      continue;
    }
    for (std::size_t p = 1; p < probes.size(); ++p) {
      if (leak_profile(m, probes[p]) != leak_profile(m, probes[0])) {
        r.indices.push_back(j);
        break;
      }
    }
  }
  finish(r, s.n());
  return r;
}

std::optional<ChallengePlan> build_challenge_plan(const BucketStructure& s,
                                                  std::size_t i,
                                                  const RemovalSet& removal,
                                                  Rng& rng) {
  check_index(s, i, 2, s.n() - 1);
  const std::uint64_t lower_lo = s.point(i - 1) + 1;
  const std::uint64_t upper_lo = s.point(i);
  const std::uint64_t upper_hi = s.point(i + 1) - 1;
  const std::uint64_t lower_hi = upper_lo - 1;  // may be < lower_lo

  auto size_of = [](std::uint64_t a, std::uint64_t b) {
    return b >= a ? b - a + 1 : 0;
  };
  const std::uint64_t lower_size = size_of(lower_lo, lower_hi);
  const std::uint64_t upper_size = size_of(upper_lo, upper_hi);

  for (int attempt = 0; attempt < kPlanRetries; ++attempt) {
    if (lower_size == 0 || upper_size == 0) break;
    ChallengePlan plan;
    plan.i = i;
    plan.left_in_lower = fair_bit(rng) == 0;
    const std::uint64_t a = plan.left_in_lower ? lower_lo : upper_lo;
    const std::uint64_t b = plan.left_in_lower ? lower_hi : upper_hi;
    if (size_of(a, b) < 2) continue;
    std::uint64_t x = uniform_int(rng, a, b);
    std::uint64_t y = uniform_int(rng, a, b - 1);
    if (y >= x) ++y;
    plan.left = {std::min(x, y), std::max(x, y)};
    plan.right = {uniform_int(rng, lower_lo, lower_hi),
                  uniform_int(rng, upper_lo, upper_hi)};

    const bool left_ok = plan.left[0] >= a && plan.left[1] <= b &&
                         plan.left[0] < plan.left[1];
    const bool right_ok = plan.right[0] >= lower_lo &&
                          plan.right[0] <= lower_hi &&
                          plan.right[1] >= upper_lo && plan.right[1] <= upper_hi;
    if (!left_ok || !right_ok) {
      throw Error(ErrorCode::kPrecondition,
                  "challenge pair left its buckets at i = " + std::to_string(i));
    }
    std::vector<bool> removed(s.n() + 1, false);
    for (std::size_t j : removal.indices) removed.at(j) = true;
    for (std::size_t j = 1; j <= s.n(); ++j) {
      if (!removed[j]) plan.context.push_back(s.point(j));
    }
    return plan;
  }
  return std::nullopt;
}

// Reduction adversary

namespace {

class ReductionAdversary final : public StaticAdversary {
 public:
  ReductionAdversary(const AttackSetup& setup, const BatchLearner& learner,
                     AttackTrialLog* log)
      : setup_(setup), learner_(learner), log_(log) {}

  ChallengeSubmission submit(Rng& rng) override {
    const std::uint64_t top = domain_size(setup_.d);
    std::vector<std::uint64_t> sample(setup_.n);
    for (auto& m : sample) m = uniform_int(rng, 1, top);
    std::sort(sample.begin(), sample.end());
    const BucketStructure s(sample, setup_.d);

    std::size_t i;
    if (setup_.focused) {
      const auto it = std::lower_bound(sample.begin(), sample.end(), top / 2);
      i = static_cast<std::size_t>(it - sample.begin()) + 1;
      i = std::clamp<std::size_t>(i, 2, setup_.n - 1);
    } else {
      i = uniform_int(rng, 2, setup_.n - 1);
    }
    log_->i = i;

    const RemovalSet removal =
        setup_.removal == RemovalConstruction::kDirect
            ? removal_set_direct(s, i, setup_.kind)
            : removal_set_ai(s, i);
    log_->removal_size = removal.indices.size();
    std::optional<ChallengePlan> plan;
    if (!removal.aborted) plan = build_challenge_plan(s, i, removal, rng);
    if (!plan) {
      log_->aborted = true;
      return ChallengeSubmission{sample, sample};
    }

    context_ = plan->context;
    pair_pos_ = static_cast<std::size_t>(
        std::lower_bound(context_.begin(), context_.end(), plan->right[0]) -
        context_.begin());
    ChallengeSubmission sub;
    sub.left = context_;
    sub.right = context_;
    sub.left.insert(sub.left.begin() + static_cast<std::ptrdiff_t>(pair_pos_),
                    plan->left.begin(), plan->left.end());
    sub.right.insert(sub.right.begin() + static_cast<std::ptrdiff_t>(pair_pos_),
                     plan->right.begin(), plan->right.end());
    return sub;
  }

  int guess(const EvalOracle& oracle, const ParamsTag& params,
            std::span<const CiphertextHandle> cts, Rng& rng) override {
    if (log_->aborted) {
      log_->guess = fair_bit(rng);
      return log_->guess;
    }
    const std::uint64_t threshold = domain_size(setup_.d) / 2;
    std::vector<LabeledExample> train;
    train.reserve(context_.size());
    for (std::size_t k = 0, c = 0; k < cts.size(); ++k) {
      if (k == pair_pos_ || k == pair_pos_ + 1) continue;
      train.push_back(LabeledExample{EncExample{cts[k], params},
                                     context_[c++] < threshold ? 1 : 0});
    }
    const auto h = learner_.fit(oracle, train, rng);
    const int first = h->predict(EncExample{cts[pair_pos_], params});
    const int second = h->predict(EncExample{cts[pair_pos_ + 1], params});
    log_->agreed = first == second;
    log_->guess = log_->agreed ? 0 : 1;
    return log_->guess;
  }

 private:
  const AttackSetup& setup_;
  const BatchLearner& learner_;
  AttackTrialLog* log_;
  std::vector<std::uint64_t> context_;
  std::size_t pair_pos_ = 0;
};

}  // namespace

AttackResult run_attack(const AttackSetup& setup, const BatchLearner& learner) {
  if (setup.n < 4) {
    throw Error(ErrorCode::kInvalidArgument, "attack needs n >= 4");
  }
  check_bit_width(setup.d);
  AttackResult result;
  result.logs.resize(setup.trials);
  GameSetup game;
  game.d = setup.d;
  game.kind = setup.kind;
  game.trials = setup.trials;
  game.seed = setup.seed;
  game.jobs = setup.jobs;
  const SecurityGameResult played =
      run_security_game(game, [&](std::size_t trial) {
        result.logs[trial] = AttackTrialLog{};
        result.logs[trial].trial = trial;
        return std::make_unique<ReductionAdversary>(setup, learner,
                                                    &result.logs[trial]);
      });
  result.estimate = played.estimate;
  std::size_t agreed = 0, counted = 0;
  for (std::size_t k = 0; k < setup.trials; ++k) {
    AttackTrialLog& log = result.logs[k];
    log.b = played.outcomes[k].b;
    log.valid = played.outcomes[k].valid;
    if (log.aborted) {
      ++result.aborted;
    } else {
      if (!log.valid) ++result.invalid_non_aborted;
      ++counted;
      agreed += log.agreed;
    }
    log.p_hat_agree =
        counted == 0 ? 0.0
                     : static_cast<double>(agreed) / static_cast<double>(counted);
  }
  result.abort_rate = setup.trials == 0
                          ? 0.0
                          : static_cast<double>(result.aborted) /
                                static_cast<double>(setup.trials);
  return result;
}

IdentityCheck advantage_identity_check(double p_i, double p_next,
                                       std::size_t trials, std::uint64_t seed) {
  if (!(p_i >= 0.0 && p_i <= 1.0 && p_next >= 0.0 && p_next <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "probabilities must be in [0, 1]");
  }
  if (trials == 0) throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
  Rng rng(seed);
  std::bernoulli_distribution lower(p_i), upper(p_next);
  std::size_t correct = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    const int b = fair_bit(rng);
    int h0, h1;
    if (b == 0) {
      auto& bucket = fair_bit(rng) == 0 ? lower : upper;
      h0 = bucket(rng);
      h1 = bucket(rng);
    } else {
      h0 = lower(rng);
      h1 = upper(rng);
    }
    const int guess = h0 == h1 ? 0 : 1;
    correct += guess == b;
  }
  const double gap = p_i - p_next;
  return IdentityCheck{static_cast<double>(correct) / static_cast<double>(trials),
                       0.5 * (1.0 + gap * gap), trials};
}

JumpCheck jump_core_check(const JumpInstance& in) {
  const std::size_t n = in.p.size();
  if (n == 0 || in.lengths.size() != n || in.split >= n) {
    throw Error(ErrorCode::kInvalidArgument,
                "malformed jump instance: need |p| = |lengths| >= 1 and split < n");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!(in.p[j] >= 0.0 && in.p[j] <= 1.0) || !(in.lengths[j] >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "malformed jump instance at index " + std::to_string(j));
    }
  }
  if (!(in.below_split >= 0.0) || !(in.above_split >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "malformed split masses");
  }
  double below = in.below_split, above = in.above_split;
  double accuracy = in.p[in.split] * in.below_split +
                    (1.0 - in.p[in.split]) * in.above_split;
  for (std::size_t j = 0; j < in.split; ++j) {
    below += in.lengths[j];
    accuracy += in.p[j] * in.lengths[j];
  }
  for (std::size_t j = in.split + 1; j < n; ++j) {
    above += in.lengths[j];
    accuracy += (1.0 - in.p[j]) * in.lengths[j];
  }
  if (std::fabs(below - 0.5) > 1e-9 || std::fabs(above - 0.5) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument,
                "malformed jump instance: each side of the threshold must carry "
                "mass 1/2");
  }
  JumpCheck out;
  out.accuracy = accuracy;
  out.precondition = accuracy >= 0.75;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    out.max_gap = std::max(out.max_gap, std::fabs(in.p[j] - in.p[j + 1]));
  }
  const double needed = 1.0 / (2.0 * static_cast<double>(n));
  out.implied = !out.precondition || out.max_gap >= needed - 1e-12;
  return out;
}

namespace {

// Split `mass` among `parts` random nonnegative shares.
std::vector<double> random_shares(std::size_t parts, double mass, Rng& rng) {
  std::vector<double> w(parts);
  std::exponential_distribution<double> expo(1.0);
  double total = 0.0;
  for (double& x : w) total += (x = expo(rng));
  for (double& x : w) x = x * mass / total;
  return w;
}

JumpInstance random_jump_instance(std::size_t n, Rng& rng) {
  JumpInstance in;
  in.split = uniform_int(rng, 0, n - 1);
  const auto left = random_shares(in.split + 1, 0.5, rng);
  const auto right = random_shares(n - in.split, 0.5, rng);
  in.lengths.assign(n, 0.0);
  for (std::size_t j = 0; j < in.split; ++j) in.lengths[j] = left[j];
  in.below_split = left[in.split];
  in.above_split = right[0];
  for (std::size_t j = in.split + 1; j < n; ++j) {
    in.lengths[j] = right[j - in.split];
  }
  // A descending ramp around the split with random height, width and noise;
  // steep ramps pass the accuracy precondition, wide ones mostly do not.
  const double high = 0.5 + 0.5 * uniform01(rng);
  const double low = 0.5 * uniform01(rng);
  const double width = 0.05 + uniform01(rng) * static_cast<double>(n) / 2.0;
  const double noise = 0.3 * uniform01(rng);
  in.p.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = (static_cast<double>(j) - static_cast<double>(in.split)) / width;
    const double base = low + (high - low) / (1.0 + std::exp(x));
    in.p[j] = std::clamp(base + noise * (2.0 * uniform01(rng) - 1.0), 0.0, 1.0);
  }
  return in;
}

}  // namespace

JumpSearch jump_core_search(std::size_t n, std::size_t feasible_target,
                            std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  JumpSearch out;
  Rng rng(seed);
  const std::size_t cap = std::max<std::size_t>(1000, 1000 * feasible_target);
  while (out.feasible < feasible_target && out.generated < cap) {
    JumpInstance in = random_jump_instance(n, rng);
    ++out.generated;
    const JumpCheck check = jump_core_check(in);
    if (!check.precondition) continue;
    ++out.feasible;
    if (!check.implied) {
      ++out.counterexamples;
      if (!out.first_counterexample) out.first_counterexample = std::move(in);
    }
  }
  return out;
}

double group_privacy_advantage_floor(double base_prob, double epsilon,
                                     double delta, std::size_t k) {
  if (!(base_prob >= 0.0 && base_prob <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "base probability must be in [0, 1]");
  }
  PrivacyParams{epsilon, delta}.validate();
  const double kf = static_cast<double>(k);
  const double slack = delta * group_delta_factor(epsilon, k);
  return std::max(0.0, (base_prob - slack) * std::exp(-kf * epsilon));
}

}  // namespace leaklab
