#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace leaklab {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Seed for stream `stream` of master seed `master`. Trial k of an experiment
// always uses derive_seed(master, k), so results do not depend on how trials
// are distributed across workers.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Uniform integer in [lo, hi].
std::uint64_t uniform_int(Rng& rng, std::uint64_t lo, std::uint64_t hi);
double uniform01(Rng& rng);
int fair_bit(Rng& rng);

// Worker count: LEAKLAB_JOBS if set and positive, else hardware concurrency.
unsigned default_jobs();

// Runs fn(trial_index, rng) for every trial with a per-trial generator seeded
// from (seed, trial_index). Output order matches trial order.
template <class T, class Fn>
std::vector<T> run_trials(std::size_t count, std::uint64_t seed, unsigned jobs,
                          Fn&& fn) {
  std::vector<T> out(count);
  if (count == 0) return out;
  const unsigned workers =
      std::max(1u, std::min<unsigned>(jobs == 0 ? default_jobs() : jobs,
                                      static_cast<unsigned>(count)));
  auto run_one = [&](std::size_t k) {
    Rng rng(derive_seed(seed, k));
    out[k] = fn(k, rng);
  };
  if (workers == 1) {
    for (std::size_t k = 0; k < count; ++k) run_one(k);
    return out;
  }
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = w; k < count; k += workers) run_one(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace leaklab
