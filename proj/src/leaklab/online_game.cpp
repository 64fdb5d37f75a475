#include "leaklab/online_game.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>

#include "leaklab/errors.hpp"

namespace leaklab {

std::string_view to_string(LearnerPhase phase) {
  switch (phase) {
    case LearnerPhase::kNone:
      return "none";
    case LearnerPhase::kBootstrap:
      return "bootstrap";
    case LearnerPhase::kOneAnchor:
      return "one-anchor";
    case LearnerPhase::kTwoAnchors:
      return "two-anchors";
  }
  return "unknown";
}

std::string_view to_string(PredictionBranch branch) {
  switch (branch) {
    case PredictionBranch::kPlain:
      return "plain";
    case PredictionBranch::kMalformed:
      return "malformed";
    case PredictionBranch::kBootstrap:
      return "bootstrap";
    case PredictionBranch::kBelowPositive:
      return "below-positive";
    case PredictionBranch::kAboveNegative:
      return "above-negative";
    case PredictionBranch::kOptimistic:
      return "optimistic";
    case PredictionBranch::kCloserPositive:
      return "closer-positive";
    case PredictionBranch::kCloserNegative:
      return "closer-negative";
  }
  return "unknown";
}

void write_transcript_csv(std::ostream& out, const GameTranscript& transcript) {
  out << "round,plaintext,prediction,label,mistake,potential\n";
  for (std::size_t i = 0; i < transcript.rounds.size(); ++i) {
    const Round& r = transcript.rounds[i];
    out << i + 1 << ',';
    if (r.plaintext) out << *r.plaintext;
    out << ',' << r.prediction << ',' << r.label << ',' << (r.mistake ? 1 : 0)
        << ',';
    if (r.potential_after) out << *r.potential_after;
    out << '\n';
  }
}

// HalvingLearner

HalvingLearner::HalvingLearner(int d) : smallest_negative_(0) {
  check_bit_width(d);
  smallest_negative_ = domain_size(d);
}

std::uint64_t HalvingLearner::midpoint() const {
  return largest_positive_ + (smallest_negative_ - largest_positive_ + 1) / 2;
}

int HalvingLearner::predict(std::uint64_t x) const {
  return x < midpoint() ? 1 : 0;
}

void HalvingLearner::observe(std::uint64_t x, int label) {
  const int prediction = predict(x);
  if (prediction == label) return;
  if (label == 1) {
    largest_positive_ = x;
  } else {
    smallest_negative_ = x;
  }
}

// LEncThrLearner

LEncThrLearner::Decision LEncThrLearner::decide(const EncExample& x) const {
  if (!params_) return {0, PredictionBranch::kBootstrap};
  if (x.params != *params_) return {0, PredictionBranch::kMalformed};
  // With both anchors one evaluation answers everything: c01 places x against
  // c+, c12 against c-, and the bit compares the two gaps.
  const CiphertextHandle& upper = negative_ ? *negative_ : *positive_;
  const auto leak_out = oracle_->eval(*params_, *positive_, x.ciphertext, upper);
  if (!leak_out) return {0, PredictionBranch::kMalformed};
  if (leak_out->c01 != Comparison::kLess) {
    return {1, PredictionBranch::kBelowPositive};
  }
  if (!negative_) return {1, PredictionBranch::kOptimistic};
  if (leak_out->c12 != Comparison::kLess) {
    return {0, PredictionBranch::kAboveNegative};
  }
  return leak_out->closeness_bit ? Decision{1, PredictionBranch::kCloserPositive}
                                 : Decision{0, PredictionBranch::kCloserNegative};
}

int LEncThrLearner::predict(const EncExample& x) const {
  return decide(x).prediction;
}

PredictionBranch LEncThrLearner::branch(const EncExample& x) const {
  return decide(x).branch;
}

LearnerPhase LEncThrLearner::phase() const {
  if (!params_) return LearnerPhase::kBootstrap;
  if (!negative_) return LearnerPhase::kOneAnchor;
  return LearnerPhase::kTwoAnchors;
}

void LEncThrLearner::observe(const EncExample& x, int label) {
  const Decision decision = decide(x);
  if (decision.prediction == label) return;
  switch (decision.branch) {
    case PredictionBranch::kBootstrap:
      params_ = x.params;
      positive_ = x.ciphertext;
      break;
    case PredictionBranch::kOptimistic:
    case PredictionBranch::kCloserPositive:
      negative_ = x.ciphertext;
      break;
    case PredictionBranch::kCloserNegative:
      positive_ = x.ciphertext;
      break;
    default:
      // Sound branches cannot err on a realizable stream.
      break;
  }
}

// Games

namespace {

std::uint64_t resolve_threshold(const std::optional<std::uint64_t>& requested,
                                int d, std::uint64_t seed) {
  const std::uint64_t top = domain_size(d);
  if (requested) {
    if (*requested < 1 || *requested > top) {
      throw Error(ErrorCode::kOutOfRange,
                  "threshold " + std::to_string(*requested) +
                      " outside [1, 2^" + std::to_string(d) + "]");
    }
    return *requested;
  }
  Rng rng(derive_seed(seed, 3));
  return uniform_int(rng, 1, top);
}

void check_rounds(std::size_t rounds) {
  if (rounds < 1) {
    throw Error(ErrorCode::kInvalidArgument, "game needs rounds >= 1");
  }
}

Round masked(const Round& r) {
  Round v = r;
  v.prediction = -1;
  v.mistake = false;
  return v;
}

}  // namespace

GameTranscript run_plain_game(const PlainGameSetup& setup,
                              PlainLearner& learner,
                              const PlainAdversaryFactory& make_adversary) {
  check_bit_width(setup.d);
  check_rounds(setup.rounds);
  GameTranscript transcript;
  transcript.d = setup.d;
  transcript.seed = setup.seed;
  transcript.threshold = resolve_threshold(setup.threshold, setup.d, setup.seed);
  transcript.learner_name = learner.name();
  auto adversary = make_adversary(setup.d, transcript.threshold, learner);
  transcript.adversary_name = adversary->name();

  const std::uint64_t top = domain_size(setup.d);
  Rng rng(derive_seed(setup.seed, 4));
  std::vector<Round> visible;
  transcript.rounds.reserve(setup.rounds);
  for (std::size_t i = 0; i < setup.rounds; ++i) {
    const auto x = adversary->next(
        setup.oblivious ? std::span<const Round>(visible)
                        : std::span<const Round>(transcript.rounds),
        rng);
    if (!x) {
      transcript.stopped_early = true;
      break;
    }
    if (*x < 1 || *x > top) {
      throw Error(ErrorCode::kOutOfRange,
                  "adversary presented " + std::to_string(*x));
    }
    Round r;
    r.plaintext = *x;
    r.prediction = learner.predict(*x);
    r.label = *x < transcript.threshold ? 1 : 0;
    r.mistake = r.prediction != r.label;
    learner.observe(*x, r.label);
    transcript.total_mistakes += r.mistake;
    transcript.rounds.push_back(r);
    if (setup.oblivious) visible.push_back(masked(r));
  }
  return transcript;
}

GameTranscript run_enc_game(const EncGameSetup& setup,
                            const EncLearnerFactory& make_learner,
                            const EncAdversaryFactory& make_adversary) {
  check_bit_width(setup.d);
  check_rounds(setup.rounds);
  GameTranscript transcript;
  transcript.d = setup.d;
  transcript.kind = setup.kind;
  transcript.seed = setup.seed;
  transcript.threshold = resolve_threshold(setup.threshold, setup.d, setup.seed);

  KeyRegistry registry(derive_seed(setup.seed, 0));
  EncGameContext context;
  context.registry = &registry;
  context.target = registry.gen(setup.d, setup.kind, derive_seed(setup.seed, 1));
  context.foreign =
      registry.gen(setup.d, setup.kind, derive_seed(setup.seed, 2));
  context.d = setup.d;
  context.kind = setup.kind;
  context.threshold = transcript.threshold;
  const EncThresholdConcept target{transcript.threshold, context.target.sk,
                                   context.target.params};

  auto learner = make_learner(registry);
  auto adversary = make_adversary(context, *learner);
  transcript.learner_name = learner->name();
  transcript.adversary_name = adversary->name();

  Rng rng(derive_seed(setup.seed, 4));
  std::vector<Round> visible;
  transcript.rounds.reserve(setup.rounds);
  for (std::size_t i = 0; i < setup.rounds; ++i) {
    const auto x = adversary->next(
        setup.oblivious ? std::span<const Round>(visible)
                        : std::span<const Round>(transcript.rounds),
        rng);
    if (!x) {
      transcript.stopped_early = true;
      break;
    }
    Round r;
    r.example = *x;
    if (x->params == target.params) {
      r.plaintext = registry.dec(target.sk, x->ciphertext);
    }
    r.phase = learner->phase();
    r.branch = learner->branch(*x);
    r.prediction = learner->predict(*x);
    r.label = eval_enc_threshold(registry, target, *x);
    r.mistake = r.prediction != r.label;
    learner->observe(*x, r.label);
    const auto pos = learner->positive_anchor();
    const auto neg = learner->negative_anchor();
    if (pos && neg) {
      const auto a = registry.dec(target.sk, *pos);
      const auto b = registry.dec(target.sk, *neg);
      if (a && b) r.potential_after = std::llabs(distance(setup.kind, *a, *b));
    }
    transcript.total_mistakes += r.mistake;
    transcript.rounds.push_back(r);
    if (setup.oblivious) visible.push_back(masked(r));
  }
  return transcript;
}

}  // namespace leaklab
