#pragma once

// Ideal function-revealing encryption. Ciphertexts are opaque (nonce, params)
// handles; plaintexts live only in the registry that issued them. Evaluation
// returns exactly the leakage of the decrypted triple, or nothing when any
// handle fails to decrypt under the key owning `params`.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "leaklab/leakage.hpp"
#include "leaklab/rng.hpp"

namespace leaklab {

struct Id128 {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  friend auto operator<=>(const Id128&, const Id128&) = default;
  std::string hex() const;
};

struct Id128Hash {
  std::size_t operator()(const Id128& id) const noexcept {
    return static_cast<std::size_t>(mix64(id.hi ^ mix64(id.lo)));
  }
};

struct ParamsTag {
  Id128 id;
  friend auto operator<=>(const ParamsTag&, const ParamsTag&) = default;
};

struct SecretKey {
  std::uint64_t key_id = ~std::uint64_t{0};
  friend auto operator<=>(const SecretKey&, const SecretKey&) = default;
};

struct CiphertextHandle {
  Id128 nonce;
  ParamsTag params;
  friend auto operator<=>(const CiphertextHandle&,
                          const CiphertextHandle&) = default;
};

struct KeyPair {
  SecretKey sk;
  ParamsTag params;
};

// The public evaluation surface. Learners and hypotheses hold a reference to
// this interface and never see a KeyRegistry.
class EvalOracle {
 public:
  virtual ~EvalOracle() = default;

  virtual std::optional<LeakOutput> eval(const ParamsTag& params,
                                         const CiphertextHandle& c0,
                                         const CiphertextHandle& c1,
                                         const CiphertextHandle& c2) const = 0;

  // Signed plaintext difference of (c0, c1). Only keys generated with
  // DistanceKind::kExact answer; every other key returns nullopt.
  virtual std::optional<std::int64_t> exact_distance(
      const ParamsTag& params, const CiphertextHandle& c0,
      const CiphertextHandle& c1) const = 0;

  // Plaintext comparison of (c0, c1), read from the leakage.
  std::optional<Comparison> compare(const ParamsTag& params,
                                    const CiphertextHandle& c0,
                                    const CiphertextHandle& c1) const;
};

// Owns every key and ciphertext table. Confined to one worker at a time.
class KeyRegistry final : public EvalOracle {
 public:
  // `salt` separates params tags of distinct registries.
  explicit KeyRegistry(std::uint64_t salt = 0);

  // Deterministic in (salt, number of prior gen calls, seed); the nonce
  // stream of a key depends on `seed` alone.
  KeyPair gen(int d, DistanceKind kind, std::uint64_t seed);

  // Throws kUnknownKey or kOutOfRange.
  CiphertextHandle enc(const SecretKey& sk, std::uint64_t m);

  std::optional<std::uint64_t> dec(const SecretKey& sk,
                                   const CiphertextHandle& c) const;

  std::optional<LeakOutput> eval(const ParamsTag& params,
                                 const CiphertextHandle& c0,
                                 const CiphertextHandle& c1,
                                 const CiphertextHandle& c2) const override;

  std::optional<std::int64_t> exact_distance(
      const ParamsTag& params, const CiphertextHandle& c0,
      const CiphertextHandle& c1) const override;

  int bit_width(const SecretKey& sk) const;
  DistanceKind kind(const SecretKey& sk) const;
  ParamsTag params(const SecretKey& sk) const;
  std::size_t ciphertext_count(const SecretKey& sk) const;

 private:
  struct KeyEntry {
    ParamsTag params;
    int bit_width;
    DistanceKind kind;
    Rng nonce_rng;
    std::unordered_map<Id128, std::uint64_t, Id128Hash> table;
  };

  const KeyEntry& entry(const SecretKey& sk) const;
  const KeyEntry* owner(const ParamsTag& params) const;
  static std::optional<std::uint64_t> lookup(const KeyEntry& key,
                                             const CiphertextHandle& c);

  std::uint64_t salt_;
  std::vector<KeyEntry> keys_;
  std::unordered_map<Id128, std::size_t, Id128Hash> by_params_;
};

}  // namespace leaklab
