#pragma once

// Config files for the leaklab CLI: a single JSON object whose keys are the
// experiment config fields. Command-line flags override file values.

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace leaklab_cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads and checks `path`. Throws ConfigError on a missing file, bad JSON,
// an unknown key (named in the message) or a mistyped value.
nlohmann::json load_config(const std::string& path);

// Keys in `overrides` replace those in `base`; the result is checked.
nlohmann::json apply_overrides(nlohmann::json base,
                               const nlohmann::json& overrides);

// Throws ConfigError unless `config` is an object of known, well-typed keys.
void check_config(const nlohmann::json& config);

}  // namespace leaklab_cli
