#include "leaklab/fre_oracle.hpp"

#include <cstdio>

#include "leaklab/errors.hpp"

namespace leaklab {

std::string Id128::hex() const {
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx",
                static_cast<unsigned long long>(hi),
                static_cast<unsigned long long>(lo));
  return buf;
}

std::optional<Comparison> EvalOracle::compare(const ParamsTag& params,
                                              const CiphertextHandle& c0,
                                              const CiphertextHandle& c1) const {
  const auto out = eval(params, c0, c1, c1);
  if (!out) return std::nullopt;
  return out->c01;
}

KeyRegistry::KeyRegistry(std::uint64_t salt) : salt_(salt) {}

KeyPair KeyRegistry::gen(int d, DistanceKind kind, std::uint64_t seed) {
  check_bit_width(d);
  const std::uint64_t counter = keys_.size();
  // derive_seed is injective in the stream argument for a fixed master, so
  // the high word alone keeps tags unique within the registry.
  ParamsTag tag;
  tag.id.hi = derive_seed(salt_, counter);
  tag.id.lo = derive_seed(seed, salt_);
  keys_.push_back(KeyEntry{tag, d, kind, Rng(seed), {}});
  by_params_.emplace(tag.id, counter);
  return KeyPair{SecretKey{counter}, tag};
}

const KeyRegistry::KeyEntry& KeyRegistry::entry(const SecretKey& sk) const {
  if (sk.key_id >= keys_.size()) {
    throw Error(ErrorCode::kUnknownKey,
                "unknown secret key " + std::to_string(sk.key_id));
  }
  return keys_[sk.key_id];
}

const KeyRegistry::KeyEntry* KeyRegistry::owner(const ParamsTag& params) const {
  const auto it = by_params_.find(params.id);
  return it == by_params_.end() ? nullptr : &keys_[it->second];
}

std::optional<std::uint64_t> KeyRegistry::lookup(const KeyEntry& key,
                                                 const CiphertextHandle& c) {
  if (c.params != key.params) return std::nullopt;
  const auto it = key.table.find(c.nonce);
  if (it == key.table.end()) return std::nullopt;
  return it->second;
}

CiphertextHandle KeyRegistry::enc(const SecretKey& sk, std::uint64_t m) {
  entry(sk);
  KeyEntry& key = keys_[sk.key_id];
  if (m < 1 || m > domain_size(key.bit_width)) {
    throw Error(ErrorCode::kOutOfRange,
                "plaintext " + std::to_string(m) + " outside [1, 2^" +
                    std::to_string(key.bit_width) + "]");
  }
  Id128 nonce;
  do {
    nonce.hi = key.nonce_rng();
    nonce.lo = key.nonce_rng();
  } while (key.table.count(nonce) != 0);
  key.table.emplace(nonce, m);
  return CiphertextHandle{nonce, key.params};
}

std::optional<std::uint64_t> KeyRegistry::dec(const SecretKey& sk,
                                              const CiphertextHandle& c) const {
  if (sk.key_id >= keys_.size()) return std::nullopt;
  return lookup(keys_[sk.key_id], c);
}

std::optional<LeakOutput> KeyRegistry::eval(const ParamsTag& params,
                                            const CiphertextHandle& c0,
                                            const CiphertextHandle& c1,
                                            const CiphertextHandle& c2) const {
  const KeyEntry* key = owner(params);
  if (key == nullptr) return std::nullopt;
  const auto m0 = lookup(*key, c0);
  if (!m0) return std::nullopt;
  const auto m1 = lookup(*key, c1);
  if (!m1) return std::nullopt;
  const auto m2 = lookup(*key, c2);
  if (!m2) return std::nullopt;
  return leak(key->kind, *m0, *m1, *m2);
}

std::optional<std::int64_t> KeyRegistry::exact_distance(
    const ParamsTag& params, const CiphertextHandle& c0,
    const CiphertextHandle& c1) const {
  const KeyEntry* key = owner(params);
  if (key == nullptr || key->kind != DistanceKind::kExact) return std::nullopt;
  const auto m0 = lookup(*key, c0);
  const auto m1 = lookup(*key, c1);
  if (!m0 || !m1) return std::nullopt;
  return distance(DistanceKind::kExact, *m0, *m1);
}

int KeyRegistry::bit_width(const SecretKey& sk) const {
  return entry(sk).bit_width;
}

DistanceKind KeyRegistry::kind(const SecretKey& sk) const {
  return entry(sk).kind;
}

ParamsTag KeyRegistry::params(const SecretKey& sk) const {
  return entry(sk).params;
}

std::size_t KeyRegistry::ciphertext_count(const SecretKey& sk) const {
  return entry(sk).table.size();
}

}  // namespace leaklab
