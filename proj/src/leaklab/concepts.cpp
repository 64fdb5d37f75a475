#include "leaklab/concepts.hpp"

#include <algorithm>
#include <ostream>

#include "leaklab/errors.hpp"

namespace leaklab {

ThresholdConcept::ThresholdConcept(std::uint64_t t, int d)
    : threshold(Plaintext(t, d).value()), bit_width(d) {}

int eval_threshold(const ThresholdConcept& target, const Plaintext& x) {
  if (x.bit_width() != target.bit_width) {
    throw Error(ErrorCode::kWidthMismatch,
                "threshold width " + std::to_string(target.bit_width) +
                    " vs plaintext width " + std::to_string(x.bit_width()));
  }
  return x.value() < target.threshold ? 1 : 0;
}

int eval_enc_threshold(const KeyRegistry& registry,
                       const EncThresholdConcept& target,
                       const EncExample& x) {
  if (x.params != target.params) return 0;
  const auto m = registry.dec(target.sk, x.ciphertext);
  return m && *m < target.threshold ? 1 : 0;
}

Dataset sample_sorted_dataset(KeyRegistry& registry, const KeyPair& keys,
                              std::uint64_t threshold, std::size_t n,
                              Rng& rng) {
  if (n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "dataset size must be >= 1");
  }
  const std::uint64_t top = domain_size(registry.bit_width(keys.sk));
  Dataset data;
  data.plaintexts.resize(n);
  for (auto& m : data.plaintexts) m = uniform_int(rng, 1, top);
  std::sort(data.plaintexts.begin(), data.plaintexts.end());
  data.examples.reserve(n);
  for (std::uint64_t m : data.plaintexts) {
    data.examples.push_back(LabeledExample{
        EncExample{registry.enc(keys.sk, m), keys.params},
        m < threshold ? 1 : 0});
  }
  return data;
}

Dataset sample_sorted_dataset(KeyRegistry& registry, const KeyPair& keys,
                              std::uint64_t threshold, std::size_t n,
                              std::uint64_t seed) {
  Rng rng(seed);
  return sample_sorted_dataset(registry, keys, threshold, n, rng);
}

AnchorThresholdHypothesis::AnchorThresholdHypothesis(
    const EvalOracle& oracle, ParamsTag params,
    std::optional<CiphertextHandle> anchor, bool inclusive)
    : oracle_(&oracle), params_(params), anchor_(anchor), inclusive_(inclusive) {}

int AnchorThresholdHypothesis::predict(const EncExample& x) const {
  if (!anchor_ || x.params != params_) return 0;
  const auto c = oracle_->compare(params_, x.ciphertext, *anchor_);
  if (!c) return 0;
  if (*c == Comparison::kLess) return 1;
  return inclusive_ && *c == Comparison::kEqual ? 1 : 0;
}

double generalization_error(KeyRegistry& registry, const KeyPair& keys,
                            std::uint64_t threshold, const Hypothesis& h,
                            std::size_t mc_samples, std::uint64_t seed) {
  if (mc_samples == 0) {
    throw Error(ErrorCode::kInvalidArgument, "mc_samples must be >= 1");
  }
  Rng rng(seed);
  const std::uint64_t top = domain_size(registry.bit_width(keys.sk));
  std::size_t wrong = 0;
  for (std::size_t k = 0; k < mc_samples; ++k) {
    const std::uint64_t m = uniform_int(rng, 1, top);
    const EncExample x{registry.enc(keys.sk, m), keys.params};
    wrong += h.predict(x) != (m < threshold ? 1 : 0);
  }
  return static_cast<double>(wrong) / static_cast<double>(mc_samples);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  out << "index,nonce_hex,params_hex,label\n";
  for (std::size_t i = 0; i < data.examples.size(); ++i) {
    const auto& ex = data.examples[i];
    out << i << ',' << ex.example.ciphertext.nonce.hex() << ','
        << ex.example.params.id.hex() << ',' << ex.label << '\n';
  }
}

void write_dataset_plaintexts_csv(std::ostream& out, const Dataset& data) {
  out << "index,plaintext\n";
  for (std::size_t i = 0; i < data.plaintexts.size(); ++i) {
    out << i << ',' << data.plaintexts[i] << '\n';
  }
}

}  // namespace leaklab
