#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "clusterrep/simulation.hpp"

namespace clusterrep::cli {

/// A config problem tied to a location in the config file when one is known.
class ConfigFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  std::string param;
  std::vector<double> values;
  std::size_t seeds = 5;
};

struct ScenarioConfig {
  SimulationConfig sim;
  std::optional<SweepSpec> sweep;
  int audit_level = 0;
  /// Dotted key -> 1-based line in the source file.
  std::map<std::string, int> key_lines;
  std::string source = "<defaults>";

  /// Runs SimulationConfig::validate and rethrows as ConfigFileError with
  /// "file:line: " in front when the failing field came from the file.
  void validate() const;
};

/// Numeric fields addressable by dotted name, for the config file, --set and sweeps.
struct ParamInfo {
  std::function<void(SimulationConfig&, double)> set;
  std::function<double(const SimulationConfig&)> get;
};
const std::map<std::string, ParamInfo>& param_registry();
bool is_sweepable(const std::string& name);
void set_param(SimulationConfig& cfg, const std::string& name, double value);

/// Parses a YAML config. Unknown keys and malformed values are reported as
/// "file:line: message". Does not run validate().
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text, const std::string& source);

/// Applies "key=value" overrides (flags beat file values).
void apply_override(ScenarioConfig& cfg, const std::string& assignment);

}  // namespace clusterrep::cli
