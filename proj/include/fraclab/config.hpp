#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace fraclab {

/// Flat key = value experiment description. Lines starting with '#' and blank lines are
/// ignored; whitespace around keys and values is trimmed; a repeated key is an error.
/// `command` names the subcommand; everything else is a parameter.
struct ExperimentConfig {
  std::string command;
  std::map<std::string, std::string> values;

  [[nodiscard]] bool has(const std::string& key) const { return values.count(key) != 0; }
  [[nodiscard]] std::string get(const std::string& key, const std::string& fallback = "") const;
  /// Throw ConfigError naming the key when missing or malformed.
  [[nodiscard]] std::string require(const std::string& key) const;
  [[nodiscard]] double get_double(const std::string& key, double fallback) const;
  [[nodiscard]] double require_double(const std::string& key) const;
  [[nodiscard]] int get_int(const std::string& key, int fallback) const;
  [[nodiscard]] std::vector<double> get_list(const std::string& key) const;  // comma separated
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);

/// Subcommand name and the identity it exercises, for `--list`.
struct CommandInfo {
  std::string name;
  std::string anchor;
  std::string keys;
};
const std::vector<CommandInfo>& command_table();

/// Validates and dispatches. Returns 0 when every checked identity passes and 1 on a
/// tolerance failure; throws ConfigError for invalid configurations. Artifacts go to the
/// `output` path (or `out` when absent).
int run_command(const ExperimentConfig& cfg, std::ostream& out);

/// load_config + run_command with diagnostics on `err`: exit 0 pass, 1 tolerance failure,
/// 2 invalid config.
int run_config(const std::string& path, std::ostream& out, std::ostream& err);

}  // namespace fraclab
