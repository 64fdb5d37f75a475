#pragma once

// Named experiments over the library, driven by a flat config object. Each
// run yields a JSON summary (deterministic given the config), named text
// artifacts, and whether the checked bound was violated.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace leaklab {

struct ExperimentConfig {
  std::optional<std::string> experiment;
  std::optional<int> d;
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> rounds;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> kind;
  std::optional<std::string> learner;
  std::optional<std::string> adversary;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<std::string> output;
  std::optional<std::string> format;  // json | csv
  std::optional<std::uint64_t> jobs;

  // Per-experiment knobs.
  std::optional<std::string> mode;  // verify-bisection: exhaustive | sampled
  std::optional<std::uint64_t> samples;
  std::optional<std::string> op;  // dp-calc: group | compose | subsample
  std::optional<std::uint64_t> k;
  std::optional<std::uint64_t> m;
  std::optional<double> epsilon2;
  std::optional<double> delta2;
  std::optional<double> p_i;
  std::optional<double> p_next;
  std::optional<std::uint64_t> probe_pairs;
  std::optional<std::uint64_t> mc_samples;
  std::optional<std::uint64_t> threshold;
  std::optional<bool> focused;
  std::optional<bool> oblivious;
  std::optional<std::string> removal;  // direct | ai
  std::optional<double> claimed;
  std::optional<double> guard;
};

// Keys accepted in a config object, in canonical order.
const std::vector<std::string>& config_keys();

// Throws Error(kParse) on a non-object, an unknown key (named in the
// message), or a value of the wrong type.
ExperimentConfig config_from_json(const nlohmann::json& j);

// Every field set in `overrides` replaces the one in `base`.
ExperimentConfig merge_config(ExperimentConfig base,
                              const ExperimentConfig& overrides);

// Set fields only. `with_io` keeps output/format/jobs.
nlohmann::json config_to_json(const ExperimentConfig& c, bool with_io = false);

const std::vector<std::string>& experiment_names();
// False for experiments that consume no randomness in their configuration.
bool experiment_needs_seed(const ExperimentConfig& c);

struct ExperimentResult {
  nlohmann::json summary;
  // (file name, contents); the first CSV listed is the primary one.
  std::vector<std::pair<std::string, std::string>> artifacts;
  std::string primary_csv;
  bool violated = false;
};

// Resolves defaults, validates names and ranges before any work, runs.
// Throws Error on bad configs.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace leaklab
