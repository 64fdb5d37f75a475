#pragma once

// Distance functions over the message space [1, 2^d] and the arity-3 leakage
// they induce: three pairwise comparisons plus one closeness bit on the sorted
// triple.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "leaklab/rng.hpp"

namespace leaklab {

inline constexpr int kMaxBitWidth = 62;

enum class Comparison : std::int8_t { kLess = -1, kEqual = 0, kGreater = 1 };

enum class DistanceKind {
  kFloorLog,   // signed floor-log distance; default for separation experiments
  kExact,      // signed difference
  kOrderOnly,  // |dist| == 1 on distinct inputs: pure order-revealing leakage
};

std::string_view to_string(Comparison c);
std::string_view to_string(DistanceKind kind);
// Accepts "floorlog", "exact", "orderonly" (case-insensitive, '-'/'_' ignored).
DistanceKind parse_distance_kind(std::string_view name);

constexpr std::uint64_t domain_size(int d) { return std::uint64_t{1} << d; }

// Throws kInvalidArgument unless 1 <= d <= 62.
void check_bit_width(int d);

// A message in [1, 2^d].
class Plaintext {
 public:
  // Throws kInvalidArgument on a bad width, kOutOfRange on a bad value.
  Plaintext(std::uint64_t value, int bit_width);

  std::uint64_t value() const { return value_; }
  int bit_width() const { return bit_width_; }

  friend bool operator==(const Plaintext&, const Plaintext&) = default;

 private:
  std::uint64_t value_;
  int bit_width_;
};

struct LeakOutput {
  Comparison c01 = Comparison::kEqual;
  Comparison c12 = Comparison::kEqual;
  Comparison c02 = Comparison::kEqual;
  std::uint8_t closeness_bit = 0;

  friend bool operator==(const LeakOutput&, const LeakOutput&) = default;

  // The three comparisons describe a realizable order of three values.
  bool comparisons_consistent() const;
  std::string to_string() const;
};

// Raw-value kernels. Callers guarantee the inputs are in the same domain.
inline Comparison compare(std::uint64_t a, std::uint64_t b) {
  return a < b ? Comparison::kLess
               : (a > b ? Comparison::kGreater : Comparison::kEqual);
}
std::int64_t floor_log_distance(std::uint64_t a, std::uint64_t b);
std::int64_t distance(DistanceKind kind, std::uint64_t a, std::uint64_t b);
LeakOutput leak(DistanceKind kind, std::uint64_t x0, std::uint64_t x1,
                std::uint64_t x2);

// Width-checked operations on Plaintext. Mismatched widths throw
// kWidthMismatch.
Comparison comp(const Plaintext& a, const Plaintext& b);
std::int64_t fld(const Plaintext& m0, const Plaintext& m1);
LeakOutput leak_from_dist(DistanceKind kind, const Plaintext& x0,
                          const Plaintext& x1, const Plaintext& x2);

// Bisection checking.

using DistanceFn = std::function<std::int64_t(std::uint64_t, std::uint64_t)>;

struct BisectionMode {
  bool exhaustive = true;
  std::uint64_t samples = 0;  // sampled mode only
  std::uint64_t seed = 0;     // sampled mode only

  static BisectionMode Exhaustive() { return {}; }
  static BisectionMode Sampled(std::uint64_t count, std::uint64_t seed) {
    return {false, count, seed};
  }
};

inline constexpr int kMaxExhaustiveBisectionWidth = 10;

struct BisectionResult {
  bool holds = true;
  // First violating triple x < y < z, or (x, y, x) with y != x when the
  // violation is dist(x, y) == 0 on distinct inputs.
  std::optional<std::array<std::uint64_t, 3>> counterexample;
  std::uint64_t triples_checked = 0;
};

// Exhaustive mode enumerates every x < y < z in [1, 2^d] in lexicographic
// order and requires d <= 10 (kBudgetExceeded otherwise).
BisectionResult check_bisection(DistanceKind kind, int d, BisectionMode mode);
BisectionResult check_bisection(const DistanceFn& dist, int d,
                                BisectionMode mode);

}  // namespace leaklab
