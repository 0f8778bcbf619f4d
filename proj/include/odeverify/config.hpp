#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "odeverify/convergence.hpp"
#include "odeverify/ode_system.hpp"

namespace odeverify {

/// Raw `key = value` pairs, as read from a config file or CLI flags.
using KeyValues = std::map<std::string, std::string>;

/// Every recognized key, in the order the resolved config is written.
[[nodiscard]] const std::vector<std::string>& config_keys();

/// Parses the flat text format: one `key = value` per line, `#` starts a
/// comment, blank lines ignored. Unknown keys and malformed lines throw
/// ConfigError.
[[nodiscard]] KeyValues parse_config_text(std::string_view text);
[[nodiscard]] KeyValues load_config_file(const std::filesystem::path& path);

enum class Fig2Scale { Desk, Paper };

/// Fully resolved experiment settings. Fields a given command does not use
/// still carry their defaults so the config round-trips.
struct ExperimentConfig {
  std::string command;
  std::string model;
  StateVector initial_state;
  std::string method;
  std::string method2;
  double dt = 0.0;
  double dt2 = 0.0;
  double t_end = 0.0;
  double output_interval = 0.0;
  NormKind norm;
  double epsilon = 1e-6;
  double threshold = 1e-2;
  int ratio = 2;
  int max_levels = 20;
  Fig2Scale scale = Fig2Scale::Desk;
  std::vector<double> dt_ladder;
  double t_probe = 0.1;
  double floor = 1e-12;
  double ceiling = 1e-2;
  std::filesystem::path out_dir;

  [[nodiscard]] QuadraticOdeSystem system() const { return build_model(model); }
};

/// Built-in defaults for a subcommand (run, compare, refine, order,
/// stability, fig1, fig2).
[[nodiscard]] KeyValues command_defaults(std::string_view command);

/// Layers defaults < file < overrides, converts to typed values and
/// validates everything a run needs (model, methods, grid divisibility,
/// ranges) before any integration starts. Throws ConfigError or UsageError.
[[nodiscard]] ExperimentConfig resolve_config(std::string_view command, const KeyValues& file,
                                              const KeyValues& overrides);

/// Inverse of resolve_config: every key, doubles in shortest round-trip form.
[[nodiscard]] KeyValues to_key_values(const ExperimentConfig& config);
[[nodiscard]] std::string serialize_config(const ExperimentConfig& config);

[[nodiscard]] std::string_view to_string(Fig2Scale s);

/// Smallest interval that both steps divide exactly (0.3 for 0.05 and 0.06).
/// Throws ConfigError when none exists within 1e5 coarse steps.
[[nodiscard]] double common_output_interval(double a, double b);

}  // namespace odeverify
