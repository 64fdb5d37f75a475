#include "leaklab/leakage.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdlib>

#include "leaklab/errors.hpp"

namespace leaklab {

std::string_view to_string(Comparison c) {
  switch (c) {
    case Comparison::kLess:
      return "<";
    case Comparison::kEqual:
      return "=";
    case Comparison::kGreater:
      return ">";
  }
  return "?";
}

std::string_view to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::kFloorLog:
      return "floorlog";
    case DistanceKind::kExact:
      return "exact";
    case DistanceKind::kOrderOnly:
      return "orderonly";
  }
  return "unknown";
}

DistanceKind parse_distance_kind(std::string_view name) {
  std::string norm;
  for (char ch : name) {
    if (ch == '-' || ch == '_') continue;
    norm.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  if (norm == "floorlog" || norm == "fld" || norm == "tfld")
    return DistanceKind::kFloorLog;
  if (norm == "exact") return DistanceKind::kExact;
  if (norm == "orderonly" || norm == "orderonlystub" || norm == "ore")
    return DistanceKind::kOrderOnly;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown distance kind '" + std::string(name) + "'");
}

void check_bit_width(int d) {
  if (d < 1 || d > kMaxBitWidth) {
    throw Error(ErrorCode::kInvalidArgument,
                "bit width must be in [1, 62], got " + std::to_string(d));
  }
}

Plaintext::Plaintext(std::uint64_t value, int bit_width)
    : value_(value), bit_width_(bit_width) {
  check_bit_width(bit_width);
  if (value < 1 || value > domain_size(bit_width)) {
    throw Error(ErrorCode::kOutOfRange,
                "plaintext " + std::to_string(value) + " outside [1, 2^" +
                    std::to_string(bit_width) + "]");
  }
}

bool LeakOutput::comparisons_consistent() const {
  // Realizable iff some assignment of three values produces the comparisons;
  // checking all order types of {0, 1, 2} over a 3-element range suffices.
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        if (compare(a, b) == c01 && compare(b, c) == c12 && compare(a, c) == c02)
          return true;
      }
  return false;
}

std::string LeakOutput::to_string() const {
  std::string s = "(";
  s += leaklab::to_string(c01);
  s += ",";
  s += leaklab::to_string(c12);
  s += ",";
  s += leaklab::to_string(c02);
  s += ",";
  s += closeness_bit ? "1" : "0";
  s += ")";
  return s;
}

std::int64_t floor_log_distance(std::uint64_t a, std::uint64_t b) {
  if (a == b) return 0;
  // bit_width(g) == floor(log2 g) + 1 for g >= 1.
  if (a > b) return static_cast<std::int64_t>(std::bit_width(a - b));
  return -static_cast<std::int64_t>(std::bit_width(b - a));
}

std::int64_t distance(DistanceKind kind, std::uint64_t a, std::uint64_t b) {
  switch (kind) {
    case DistanceKind::kFloorLog:
      return floor_log_distance(a, b);
    case DistanceKind::kExact:
      return a >= b ? static_cast<std::int64_t>(a - b)
                    : -static_cast<std::int64_t>(b - a);
    case DistanceKind::kOrderOnly:
      return a == b ? 0 : (a > b ? 1 : -1);
  }
  return 0;
}

namespace {

template <class Dist>
LeakOutput leak_with(const Dist& dist, std::uint64_t x0, std::uint64_t x1,
                     std::uint64_t x2) {
  std::uint64_t y0 = x0, y1 = x1, y2 = x2;
  if (y0 > y1) std::swap(y0, y1);
  if (y1 > y2) std::swap(y1, y2);
  if (y0 > y1) std::swap(y0, y1);
  const std::int64_t lower = std::llabs(dist(y0, y1));
  const std::int64_t upper = std::llabs(dist(y1, y2));
  return LeakOutput{compare(x0, x1), compare(x1, x2), compare(x0, x2),
                    static_cast<std::uint8_t>(lower < upper ? 1 : 0)};
}

void check_same_width(const Plaintext& a, const Plaintext& b) {
  if (a.bit_width() != b.bit_width()) {
    throw Error(ErrorCode::kWidthMismatch,
                "plaintext widths differ: " + std::to_string(a.bit_width()) +
                    " vs " + std::to_string(b.bit_width()));
  }
}

template <class Dist>
BisectionResult bisection_exhaustive(const Dist& dist, int d) {
  BisectionResult result;
  const std::uint64_t top = domain_size(d);
  for (std::uint64_t x = 1; x <= top; ++x) {
    for (std::uint64_t y = 1; y <= top; ++y) {
      if (x != y && dist(x, y) == 0) {
        result.holds = false;
        result.counterexample = {x, y, x};
        return result;
      }
    }
  }
  for (std::uint64_t x = 1; x <= top; ++x) {
    for (std::uint64_t y = x + 1; y <= top; ++y) {
      const std::int64_t yx = std::llabs(dist(y, x));
      for (std::uint64_t z = y + 1; z <= top; ++z) {
        ++result.triples_checked;
        const std::int64_t zx = std::llabs(dist(z, x));
        if (yx < zx) continue;
        if (std::llabs(dist(z, y)) < zx) continue;
        result.holds = false;
        result.counterexample = {x, y, z};
        return result;
      }
    }
  }
  return result;
}

template <class Dist>
BisectionResult bisection_sampled(const Dist& dist, int d, std::uint64_t count,
                                  std::uint64_t seed) {
  BisectionResult result;
  if (domain_size(d) < 3) return result;
  Rng rng(seed);
  const std::uint64_t top = domain_size(d);
  for (std::uint64_t k = 0; k < count; ++k) {
    std::array<std::uint64_t, 3> t{};
    do {
      for (auto& v : t) v = uniform_int(rng, 1, top);
      std::sort(t.begin(), t.end());
    } while (t[0] == t[1] || t[1] == t[2]);
    const auto [x, y, z] = t;
    ++result.triples_checked;
    if (dist(x, y) == 0 || dist(y, z) == 0) {
      result.holds = false;
      result.counterexample = dist(x, y) == 0 ? std::array{x, y, x}
                                              : std::array{y, z, y};
      return result;
    }
    const std::int64_t zx = std::llabs(dist(z, x));
    if (std::llabs(dist(y, x)) < zx || std::llabs(dist(z, y)) < zx) continue;
    result.holds = false;
    result.counterexample = t;
    return result;
  }
  return result;
}

template <class Dist>
BisectionResult bisection_dispatch(const Dist& dist, int d,
                                   const BisectionMode& mode) {
  check_bit_width(d);
  if (mode.exhaustive) {
    if (d > kMaxExhaustiveBisectionWidth) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "exhaustive bisection check limited to d <= 10, got d = " +
                      std::to_string(d));
    }
    return bisection_exhaustive(dist, d);
  }
  return bisection_sampled(dist, d, mode.samples, mode.seed);
}

}  // namespace

LeakOutput leak(DistanceKind kind, std::uint64_t x0, std::uint64_t x1,
                std::uint64_t x2) {
  switch (kind) {
    case DistanceKind::kFloorLog:
      return leak_with(floor_log_distance, x0, x1, x2);
    case DistanceKind::kExact:
      return leak_with(
          [](std::uint64_t a, std::uint64_t b) {
            return distance(DistanceKind::kExact, a, b);
          },
          x0, x1, x2);
    case DistanceKind::kOrderOnly:
      return leak_with(
          [](std::uint64_t a, std::uint64_t b) {
            return distance(DistanceKind::kOrderOnly, a, b);
          },
          x0, x1, x2);
  }
  return {};
}

Comparison comp(const Plaintext& a, const Plaintext& b) {
  check_same_width(a, b);
  return compare(a.value(), b.value());
}

std::int64_t fld(const Plaintext& m0, const Plaintext& m1) {
  check_same_width(m0, m1);
  return floor_log_distance(m0.value(), m1.value());
}

LeakOutput leak_from_dist(DistanceKind kind, const Plaintext& x0,
                          const Plaintext& x1, const Plaintext& x2) {
  check_same_width(x0, x1);
  check_same_width(x1, x2);
  return leak(kind, x0.value(), x1.value(), x2.value());
}

BisectionResult check_bisection(DistanceKind kind, int d, BisectionMode mode) {
  return bisection_dispatch(
      [kind](std::uint64_t a, std::uint64_t b) { return distance(kind, a, b); },
      d, mode);
}

BisectionResult check_bisection(const DistanceFn& dist, int d,
                                BisectionMode mode) {
  return bisection_dispatch(dist, d, mode);
}

}  // namespace leaklab
