#include "leaklab/lemma_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "leaklab/errors.hpp"

namespace leaklab {

std::string_view to_string(Verdict v) {
  return v == Verdict::kConsistent ? "Consistent" : "Violated";
}

Verdict lemma_verdict(double rate, double ci, std::optional<double> claimed) {
  if (claimed && rate + ci < *claimed) return Verdict::kViolated;
  return Verdict::kConsistent;
}

std::vector<std::uint64_t> uniform_sorted_sample(std::size_t n, int d,
                                                 Rng& rng) {
  std::vector<std::uint64_t> out(n);
  const std::uint64_t top = domain_size(d);
  for (auto& m : out) m = uniform_int(rng, 1, top);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct TrialResult {
  bool success = true;
  bool secondary = true;  // condition 2 for log-invariance
  double stat = 0.0;
  std::optional<Violation> violation;
};

void check_setup(const LemmaSetup& setup, std::size_t min_n) {
  check_bit_width(setup.d);
  if (setup.n < min_n) {
    throw Error(ErrorCode::kPrecondition,
                "n must be >= " + std::to_string(min_n) + ", got " +
                    std::to_string(setup.n));
  }
  if (setup.trials == 0) {
    throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
  }
}

double ci95(double rate, std::size_t trials) {
  return 1.96 * std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials));
}

template <class Fn>
LemmaReport run_lemma(const std::string& name, const LemmaSetup& setup,
                      double default_claim, bool two_conditions,
                      Fn&& trial_fn) {
  const Sampler sampler =
      setup.sampler ? setup.sampler : Sampler(uniform_sorted_sample);
  const auto results = run_trials<TrialResult>(
      setup.trials, setup.seed, setup.jobs, [&](std::size_t trial, Rng& rng) {
        const BucketStructure s(sampler(setup.n, setup.d, rng), setup.d);
        TrialResult r = trial_fn(s, rng);
        if (r.violation) r.violation->trial = trial;
        return r;
      });
  LemmaReport report;
  report.lemma = name;
  report.n = setup.n;
  report.d = setup.d;
  report.trials = setup.trials;
  report.claimed = setup.claimed ? setup.claimed : default_claim;
  // 4 log2(n) 2^d / n < 2^(d-1), i.e. 8 log2(n) < n.
  report.diagnostic_only =
      8.0 * std::log2(static_cast<double>(setup.n)) >= static_cast<double>(setup.n);
  report.per_trial.reserve(results.size());
  for (const auto& r : results) {
    report.success += r.success;
    report.per_trial.push_back(r.success ? 1 : 0);
    report.observed_max = std::max(report.observed_max, r.stat);
    if (!r.success && !report.first_violation && r.violation) {
      report.first_violation = r.violation;
    }
  }
  report.rate = static_cast<double>(report.success) /
                static_cast<double>(report.trials);
  report.ci = ci95(report.rate, report.trials);
  report.verdict = lemma_verdict(report.rate, report.ci, report.claimed);
  if (two_conditions) {
    ConditionRate first{"condition-1", report.success, report.rate, report.ci,
                        report.claimed};
    ConditionRate second{"condition-2", 0, 0.0, 0.0, std::nullopt};
    for (const auto& r : results) second.success += r.secondary;
    second.rate = static_cast<double>(second.success) /
                  static_cast<double>(report.trials);
    second.ci = ci95(second.rate, report.trials);
    report.conditions = {first, second};
  }
  return report;
}

double one_minus(double k, std::size_t n) {
  return 1.0 - k / static_cast<double>(n);
}

std::vector<bool> removed_mask(const RemovalSet& r, std::size_t n) {
  std::vector<bool> mask(n + 1, false);
  for (std::size_t j : r.indices) mask[j] = true;
  return mask;
}

}  // namespace

LemmaReport verify_regularity(const LemmaSetup& setup) {
  check_setup(setup, 2);
  const std::size_t budget = removal_budget(setup.n);
  return run_lemma(
      "regularity", setup, one_minus(1.0, setup.n), false,
      [&](const BucketStructure& s, Rng&) {
        TrialResult r;
        for (std::size_t i = 1; i <= s.n(); ++i) {
          const std::size_t size = removal_set_ai(s, i).indices.size();
          r.stat = std::max(r.stat, static_cast<double>(size));
          if (size > budget && r.success) {
            r.success = false;
            r.violation = Violation{0, i, s.point(i),
                                    "|A_i & S| = " + std::to_string(size)};
          }
        }
        return r;
      });
}

LemmaReport verify_bucket_sizes(const LemmaSetup& setup) {
  check_setup(setup, 2);
  const double bound = guard_band(setup.n, setup.d);
  return run_lemma(
      "bucket-sizes", setup, one_minus(1.0, setup.n), false,
      [&](const BucketStructure& s, Rng&) {
        TrialResult r;
        for (std::size_t i = 0; i <= s.n(); ++i) {
          const double len = static_cast<double>(s.bucket_length(i));
          r.stat = std::max(r.stat, len);
          if (len > bound && r.success) {
            r.success = false;
            r.violation = Violation{0, i, s.point(i),
                                    "bucket length " + std::to_string(s.bucket_length(i))};
          }
        }
        return r;
      });
}

LemmaReport verify_fldspread(const LemmaSetup& setup,
                             std::optional<double> guard) {
  check_setup(setup, 3);
  const std::size_t budget = removal_budget(setup.n);
  const double g = guard ? *guard : guard_band(setup.n, setup.d);
  return run_lemma(
      guard ? "fldspread-guard-override" : "fldspread", setup,
      one_minus(2.0, setup.n), false, [&](const BucketStructure& s, Rng&) {
        TrialResult r;
        for (std::size_t i = 2; i + 1 <= s.n() && r.success; ++i) {
          const RemovalSet rem = removal_set_ai(s, i, g);
          r.stat = std::max(r.stat, static_cast<double>(rem.indices.size()));
          if (rem.indices.size() > budget) {
            r.success = false;
            r.violation = Violation{0, i, 0,
                                    "|R_i| = " + std::to_string(rem.indices.size())};
            break;
          }
          const auto removed = removed_mask(rem, s.n());
          const std::uint64_t below = s.point(i - 1), above = s.point(i + 1);
          for (std::size_t j = 1; j <= s.n(); ++j) {
            if (removed[j]) continue;
            const std::uint64_t y = s.point(j);
            if (floor_log_distance(y, below) != floor_log_distance(y, above)) {
              r.success = false;
              r.violation = Violation{0, i, y, "fld to the interval ends differs"};
              break;
            }
          }
        }
        return r;
      });
}

namespace {

std::array<LeakOutput, 6> permutations(std::uint64_t a, std::uint64_t b,
                                       std::uint64_t c) {
  const DistanceKind k = DistanceKind::kFloorLog;
  return {leak(k, a, b, c), leak(k, a, c, b), leak(k, b, a, c),
          leak(k, b, c, a), leak(k, c, a, b), leak(k, c, b, a)};
}

std::array<LeakOutput, 27> pair_profile(std::uint64_t m, std::uint64_t z1,
                                        std::uint64_t z2) {
  const std::array<std::uint64_t, 3> v{m, z1, z2};
  std::array<LeakOutput, 27> out;
  std::size_t k = 0;
  for (auto a : v)
    for (auto b : v)
      for (auto c : v) out[k++] = leak(DistanceKind::kFloorLog, a, b, c);
  return out;
}

}  // namespace

LemmaReport verify_log_invariance(const LemmaSetup& setup,
                                  std::size_t probe_pairs) {
  check_setup(setup, 3);
  if (probe_pairs < 8) {
    throw Error(ErrorCode::kInvalidArgument, "probe_pairs must be >= 8");
  }
  return run_lemma(
      "log-invariance", setup, one_minus(2.0, setup.n), true,
      [&](const BucketStructure& s, Rng& rng) {
        TrialResult r;
        for (std::size_t i = 2; i + 1 <= s.n(); ++i) {
          const std::uint64_t lo = s.point(i - 1) + 1;
          const std::uint64_t hi = s.point(i + 1) - 1;
          if (lo > hi) continue;  // nothing can sit inside
          const auto removed = removed_mask(removal_set_ai(s, i), s.n());
          std::vector<std::uint64_t> context;
          for (std::size_t j = 1; j <= s.n(); ++j)
            if (!removed[j]) context.push_back(s.point(j));

          // Probe points and ascending probe pairs inside [lo, hi].
          const std::uint64_t mid = lo + (hi - lo) / 2;
          std::vector<std::uint64_t> points{lo, hi, mid};
          for (std::size_t k = 0; k < probe_pairs; ++k)
            points.push_back(uniform_int(rng, lo, hi));
          std::vector<std::array<std::uint64_t, 2>> pairs;
          if (hi > lo) {
            pairs = {{lo, lo + 1}, {lo, hi}, {hi - 1, hi}};
            if (mid + 1 <= hi) pairs.push_back({mid, mid + 1});
            while (pairs.size() < probe_pairs) {
              std::uint64_t a = uniform_int(rng, lo, hi);
              std::uint64_t b = uniform_int(rng, lo, hi - 1);
              if (b >= a) ++b;
              pairs.push_back({std::min(a, b), std::max(a, b)});
            }
          }

          // Condition 1. A survivor whose fld to the interval ends agrees has
          // constant fld (and comparisons) against every interior point, so
          // only the others can make a triple depend on the point.
          if (r.success) {
            for (std::uint64_t u : context) {
              const bool varies = (lo <= u && u <= hi) ||
                                  floor_log_distance(u, lo) != floor_log_distance(u, hi);
              if (!varies) continue;
              for (std::uint64_t m2 : context) {
                const auto ref = permutations(u, m2, points[0]);
                bool same = true;
                for (std::size_t p = 1; p < points.size() && same; ++p)
                  same = permutations(u, m2, points[p]) == ref;
                if (!same) {
                  r.success = false;
                  r.violation = Violation{0, i, u, "condition 1"};
                  break;
                }
              }
              if (!r.success) break;
            }
          }

          // Condition 2. For a constant-fld survivor the 27 leak patterns
          // against (z1, z2) depend on the pair only through whether
          // |fld(z1, z2)| crosses the survivor's |fld| to the interval, and
          // that is monotone in the gap: the extreme gaps decide it.
          if (r.secondary && !pairs.empty()) {
            std::int64_t gmin = INT64_MAX, gmax = 0;
            for (const auto& p : pairs) {
              const std::int64_t g = std::llabs(floor_log_distance(p[0], p[1]));
              gmin = std::min(gmin, g);
              gmax = std::max(gmax, g);
            }
            for (std::uint64_t m : context) {
              const std::int64_t f_lo = floor_log_distance(m, lo);
              const bool varies = (lo <= m && m <= hi) ||
                                  f_lo != floor_log_distance(m, hi);
              bool same = true;
              if (varies) {
                const auto ref = pair_profile(m, pairs[0][0], pairs[0][1]);
                for (std::size_t p = 1; p < pairs.size() && same; ++p)
                  same = pair_profile(m, pairs[p][0], pairs[p][1]) == ref;
              } else {
                const std::int64_t f = std::llabs(f_lo);
                same = m < lo ? (f < gmin) == (f < gmax)
                              : (gmin < f) == (gmax < f);
              }
              if (!same) {
                r.secondary = false;
                break;
              }
            }
          }
          if (!r.success && !r.secondary) break;
        }
        return r;
      });
}

}  // namespace leaklab
