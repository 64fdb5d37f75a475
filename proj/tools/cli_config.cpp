#include "cli_config.hpp"

#include <fstream>
#include <sstream>

#include "leaklab/leaklab.h"

namespace leaklab_cli {

void check_config(const nlohmann::json& config) {
  if (ll_config_check(config.dump().c_str()) != LL_OK) {
    throw ConfigError(ll_last_error());
  }
}

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream text;
  text << in.rdbuf();
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(text.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  check_config(config);
  return config;
}

nlohmann::json apply_overrides(nlohmann::json base,
                               const nlohmann::json& overrides) {
  if (base.is_null()) base = nlohmann::json::object();
  for (const auto& [key, value] : overrides.items()) base[key] = value;
  check_config(base);
  return base;
}

}  // namespace leaklab_cli
