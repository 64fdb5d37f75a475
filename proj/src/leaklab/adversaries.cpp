#include "leaklab/adversaries.hpp"

#include <algorithm>

#include "leaklab/errors.hpp"

namespace leaklab {

namespace {

constexpr int kUnseenAttempts = 32;

// Binary search for the largest x in [1, top] with predict(x) == 1, assuming
// predictions are 1 up to some point and 0 after it. Returns 0 when even 1
// is predicted 0.
template <class Predict>
std::uint64_t prediction_boundary(std::uint64_t top, Predict&& predict) {
  if (predict(std::uint64_t{1}) == 0) return 0;
  if (predict(top) == 1) return top;
  std::uint64_t lo = 1, hi = top;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (predict(mid) == 1) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::vector<std::uint64_t> search_candidates(std::uint64_t boundary,
                                             std::uint64_t threshold,
                                             std::uint64_t top) {
  std::vector<std::uint64_t> out;
  auto add = [&](std::uint64_t x) {
    if (x >= 1 && x <= top) out.push_back(x);
  };
  add(boundary);
  add(boundary + 1);
  add(threshold - 1);
  add(threshold);
  add(1);
  add(top);
  return out;
}

template <class Seen>
std::uint64_t unseen_point(std::uint64_t top, const Seen& seen, Rng& rng) {
  std::uint64_t x = uniform_int(rng, 1, top);
  for (int k = 1; k < kUnseenAttempts && seen.count(x) != 0; ++k) {
    x = uniform_int(rng, 1, top);
  }
  return x;
}

}  // namespace

// RandomPlainAdversary

std::optional<std::uint64_t> RandomPlainAdversary::next(
    std::span<const Round>, Rng& rng) {
  return uniform_int(rng, 1, top_);
}

// AdaptivePlainAdversary

AdaptivePlainAdversary::AdaptivePlainAdversary(const PlainLearner& learner,
                                               int d, std::uint64_t threshold)
    : shadow_(learner.clone()), top_(domain_size(d)), threshold_(threshold) {}

std::optional<std::uint64_t> AdaptivePlainAdversary::next(
    std::span<const Round> history, Rng& rng) {
  for (; replayed_ < history.size(); ++replayed_) {
    const Round& r = history[replayed_];
    if (shadow_->predict(*r.plaintext) != r.label) exhausted_ = false;
    shadow_->observe(*r.plaintext, r.label);
  }
  std::uint64_t x = 0;
  if (!exhausted_) {
    auto predict = [&](std::uint64_t m) { return shadow_->predict(m); };
    const std::uint64_t b = prediction_boundary(top_, predict);
    for (std::uint64_t c : search_candidates(b, threshold_, top_)) {
      if (predict(c) != label(c)) {
        x = c;
        break;
      }
    }
    if (x == 0) exhausted_ = true;
  }
  if (x == 0) x = unseen_point(top_, seen_, rng);
  seen_.insert(x);
  return x;
}

// RandomEncAdversary

std::optional<EncExample> RandomEncAdversary::next(std::span<const Round>,
                                                   Rng& rng) {
  KeyRegistry& registry = *context_.registry;
  const std::uint64_t top = domain_size(context_.d);
  const double u = uniform01(rng);
  if (u < 0.8) {
    return EncExample{registry.enc(context_.target.sk, uniform_int(rng, 1, top)),
                      context_.target.params};
  }
  if (u < 0.9) {
    CiphertextHandle forged;
    forged.nonce = Id128{rng(), rng()};
    forged.params = context_.target.params;
    return EncExample{forged, context_.target.params};
  }
  return EncExample{
      registry.enc(context_.foreign.sk, uniform_int(rng, 1, top)),
      context_.foreign.params};
}

// AdaptiveEncAdversary

AdaptiveEncAdversary::AdaptiveEncAdversary(const EncGameContext& context,
                                           const EncLearner& learner)
    : context_(context), shadow_(learner.clone()) {
  KeyRegistry& registry = *context_.registry;
  const std::uint64_t mid = domain_size(context_.d) / 2;
  CiphertextHandle forged;
  forged.nonce = Id128{mix64(context_.target.params.id.hi), ~std::uint64_t{0}};
  forged.params = context_.target.params;
  // Forged nonce; foreign key under foreign params; a valid ciphertext under
  // the wrong params tag.
  malformed_probes_.push_back(EncExample{forged, context_.target.params});
  malformed_probes_.push_back(EncExample{
      registry.enc(context_.foreign.sk, mid), context_.foreign.params});
  malformed_probes_.push_back(
      EncExample{registry.enc(context_.target.sk, 1), context_.foreign.params});
}

EncExample AdaptiveEncAdversary::encrypt(std::uint64_t m) {
  const auto it = cache_.find(m);
  if (it != cache_.end()) return it->second;
  const EncExample x{context_.registry->enc(context_.target.sk, m),
                     context_.target.params};
  cache_.emplace(m, x);
  return x;
}

std::optional<EncExample> AdaptiveEncAdversary::next(
    std::span<const Round> history, Rng& rng) {
  for (; replayed_ < history.size(); ++replayed_) {
    const Round& r = history[replayed_];
    if (shadow_->predict(*r.example) != r.label) exhausted_ = false;
    shadow_->observe(*r.example, r.label);
  }
  const std::uint64_t top = domain_size(context_.d);
  if (!exhausted_) {
    auto p = [&](std::uint64_t m) { return predict(m); };
    const std::uint64_t b = prediction_boundary(top, p);
    for (std::uint64_t c : search_candidates(b, context_.threshold, top)) {
      if (p(c) != label(c)) {
        presented_.insert(c);
        return encrypt(c);
      }
    }
    for (const EncExample& probe : malformed_probes_) {
      if (shadow_->predict(probe) != 0) return probe;
    }
    exhausted_ = true;
  }
  const std::uint64_t x = unseen_point(top, presented_, rng);
  presented_.insert(x);
  return encrypt(x);
}

// OreBreakerAdversary

OreBreakerAdversary::OreBreakerAdversary(const EncGameContext& context,
                                         SymmetryStats* stats)
    : context_(context), stats_(stats),
      smallest_negative_(domain_size(context.d) + 1) {
  if (context_.threshold != domain_size(context_.d) / 2) {
    throw Error(ErrorCode::kPrecondition,
                "ore-breaker needs the concept at 2^(d-1)");
  }
}

bool OreBreakerAdversary::candidates_symmetric(std::uint64_t a,
                                               std::uint64_t b,
                                               Rng& rng) const {
  const DistanceKind kind = context_.kind;
  // Every history point lies outside (g, s), so both candidates compare the
  // same way to all of them; check it anyway, it is cheap.
  for (const auto* side : {&positives_, &negatives_})
    for (std::uint64_t h : *side)
      if (compare(a, h) != compare(b, h)) return false;
  // With identical comparisons every permutation of a triple leaks the same
  // way for both candidates iff the sorted closeness bit agrees, so one
  // evaluation per unordered pair suffices.
  std::vector<std::uint64_t> near;
  auto take = [&](const std::vector<std::uint64_t>& side) {
    const std::size_t k = std::min(kNeighbourPoints, side.size());
    near.insert(near.end(), side.end() - static_cast<std::ptrdiff_t>(k),
                side.end());
  };
  take(positives_);
  take(negatives_);
  auto same = [&](std::uint64_t h1, std::uint64_t h2) {
    return leak(kind, a, h1, h2) == leak(kind, b, h1, h2);
  };
  for (std::size_t i = 0; i < near.size(); ++i) {
    if (leak(kind, a, a, near[i]) != leak(kind, b, b, near[i])) return false;
    for (std::size_t j = i; j < near.size(); ++j)
      if (!same(near[i], near[j])) return false;
  }
  const std::size_t total = positives_.size() + negatives_.size();
  if (total == 0) return true;
  auto at = [&](std::uint64_t k) {
    return k < positives_.size() ? positives_[k]
                                 : negatives_[k - positives_.size()];
  };
  for (std::size_t k = 0; k < kRandomPairs; ++k) {
    if (!same(at(uniform_int(rng, 0, total - 1)),
              at(uniform_int(rng, 0, total - 1))))
      return false;
  }
  return true;
}

std::optional<EncExample> OreBreakerAdversary::next(std::span<const Round>,
                                                    Rng& rng) {
  const std::uint64_t low = largest_positive_ + 1;
  const std::uint64_t high = smallest_negative_ - 1;
  if (low > high) return std::nullopt;
  if (stats_ != nullptr) {
    ++stats_->rounds_checked;
    if (!candidates_symmetric(low, high, rng)) {
      ++stats_->asymmetric_rounds;
      if (!stats_->first_asymmetric_round)
        stats_->first_asymmetric_round = stats_->rounds_checked;
    }
  }
  const std::uint64_t x = fair_bit(rng) == 0 ? low : high;
  if (x < context_.threshold) {
    largest_positive_ = x;
    positives_.push_back(x);
  } else {
    smallest_negative_ = x;
    negatives_.push_back(x);
  }
  return EncExample{context_.registry->enc(context_.target.sk, x),
                    context_.target.params};
}

// Factories

PlainAdversaryFactory plain_adversary_factory(std::string_view name) {
  if (name == "random") {
    return [](int d, std::uint64_t, const PlainLearner&) {
      return std::make_unique<RandomPlainAdversary>(d);
    };
  }
  if (name == "adaptive") {
    return [](int d, std::uint64_t threshold, const PlainLearner& learner) {
      return std::make_unique<AdaptivePlainAdversary>(learner, d, threshold);
    };
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown plain adversary '" + std::string(name) + "'");
}

EncAdversaryFactory enc_adversary_factory(std::string_view name,
                                          SymmetryStats* stats) {
  if (name == "random") {
    return [](const EncGameContext& context, const EncLearner&) {
      return std::make_unique<RandomEncAdversary>(context);
    };
  }
  if (name == "adaptive") {
    return [](const EncGameContext& context, const EncLearner& learner) {
      return std::make_unique<AdaptiveEncAdversary>(context, learner);
    };
  }
  if (name == "ore-breaker" || name == "orebreaker") {
    return [stats](const EncGameContext& context, const EncLearner&) {
      return std::make_unique<OreBreakerAdversary>(context, stats);
    };
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown adversary '" + std::string(name) + "'");
}

}  // namespace leaklab
