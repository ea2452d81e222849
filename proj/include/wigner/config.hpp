#pragma once

#include <map>
#include <string>

#include "wigner/errors.hpp"
#include "wigner/simulation.hpp"

namespace wigner {

/// A configuration problem tied to one key.
class ConfigError : public ParameterError {
public:
  ConfigError(const std::string& key, const std::string& what)
      : ParameterError("config key '" + key + "': " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

/// Flat `dotted.key = value` lines; '#' starts a comment. Later duplicates
/// are an error.
struct ConfigEntries {
  std::map<std::string, std::string> values;
  std::map<std::string, int> lines;
};

ConfigEntries parse_config_text(const std::string& text);
ConfigEntries load_config_file(const std::string& path);

/// Builds and validates a configuration. Unknown keys, missing required keys
/// (grid.*, time.dt, time.t_final, potential.kind, init.kind) and malformed
/// values raise ConfigError naming the key.
SimulationConfig config_from_entries(const ConfigEntries& entries);

/// Fully resolved configuration in the same format; parsing it back yields
/// an identical SimulationConfig.
std::string config_to_text(const SimulationConfig& config);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

}  // namespace wigner
