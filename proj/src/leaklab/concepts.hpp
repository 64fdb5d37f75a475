#pragma once

// Threshold concepts over [1, 2^d], their encrypted counterparts, labeled
// datasets, and hypotheses that see plaintexts only through an EvalOracle.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "leaklab/fre_oracle.hpp"
#include "leaklab/leakage.hpp"
#include "leaklab/rng.hpp"

namespace leaklab {

// f_t(x) = 1 iff x < t.
struct ThresholdConcept {
  std::uint64_t threshold = 1;
  int bit_width = 1;

  // Throws kInvalidArgument / kOutOfRange like Plaintext.
  ThresholdConcept(std::uint64_t t, int d);
};

int eval_threshold(const ThresholdConcept& target, const Plaintext& x);

// What a learner receives per example.
struct EncExample {
  CiphertextHandle ciphertext;
  ParamsTag params;
};

struct LabeledExample {
  EncExample example;
  int label = 0;
};

// Harness-side concept: holds the key, so it may decrypt.
struct EncThresholdConcept {
  std::uint64_t threshold = 1;
  SecretKey sk;
  ParamsTag params;
};

// 1 iff the example carries the concept's params, decrypts under its key, and
// decrypts below the threshold.
int eval_enc_threshold(const KeyRegistry& registry,
                       const EncThresholdConcept& target,
                       const EncExample& x);

struct Dataset {
  std::vector<LabeledExample> examples;
  // Harness-only: the plaintext under example i.
  std::vector<std::uint64_t> plaintexts;
};

// n i.i.d. uniform plaintexts, sorted, encrypted one by one, labeled by f_t.
// Throws kInvalidArgument when n == 0.
Dataset sample_sorted_dataset(KeyRegistry& registry, const KeyPair& keys,
                              std::uint64_t threshold, std::size_t n,
                              Rng& rng);
Dataset sample_sorted_dataset(KeyRegistry& registry, const KeyPair& keys,
                              std::uint64_t threshold, std::size_t n,
                              std::uint64_t seed);

class Hypothesis {
 public:
  virtual ~Hypothesis() = default;
  virtual int predict(const EncExample& x) const = 0;
};

class ConstantHypothesis final : public Hypothesis {
 public:
  explicit ConstantHypothesis(int value) : value_(value != 0 ? 1 : 0) {}
  int predict(const EncExample&) const override { return value_; }

 private:
  int value_;
};

// Threshold placed at a training ciphertext: 1 iff x carries `params`,
// evaluates, and sits below the anchor (or at it, when inclusive). Without an
// anchor it predicts 0 everywhere.
class AnchorThresholdHypothesis final : public Hypothesis {
 public:
  AnchorThresholdHypothesis(const EvalOracle& oracle, ParamsTag params,
                            std::optional<CiphertextHandle> anchor,
                            bool inclusive);
  int predict(const EncExample& x) const override;

  const std::optional<CiphertextHandle>& anchor() const { return anchor_; }
  bool inclusive() const { return inclusive_; }

 private:
  const EvalOracle* oracle_;
  ParamsTag params_;
  std::optional<CiphertextHandle> anchor_;
  bool inclusive_;
};

// Harness stub that decrypts; used as the exact-concept reference.
class OracleConceptHypothesis final : public Hypothesis {
 public:
  OracleConceptHypothesis(const KeyRegistry& registry,
                          EncThresholdConcept target)
      : registry_(&registry), target_(target) {}
  int predict(const EncExample& x) const override {
    return eval_enc_threshold(*registry_, target_, x);
  }

 private:
  const KeyRegistry* registry_;
  EncThresholdConcept target_;
};

// Monte Carlo error of h against f_t on fresh uniform encryptions under
// `keys`. The fresh ciphertexts stay registered.
double generalization_error(KeyRegistry& registry, const KeyPair& keys,
                            std::uint64_t threshold, const Hypothesis& h,
                            std::size_t mc_samples, std::uint64_t seed);

// Columns: index, nonce_hex, params_hex, label.
void write_dataset_csv(std::ostream& out, const Dataset& data);
// Columns: index, plaintext.
void write_dataset_plaintexts_csv(std::ostream& out, const Dataset& data);

}  // namespace leaklab
