#include "odeverify/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "odeverify/errors.hpp"
#include "odeverify/format.hpp"
#include "odeverify/integrators.hpp"

namespace odeverify {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError("'" + key + "': expected a finite number, got '" + std::string(text) + "'");
  }
  return v;
}

int parse_int(const std::string& key, std::string_view text) {
  text = trim(text);
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError("'" + key + "': expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& key, std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_double(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw ConfigError("'" + key + "': expected a comma-separated list");
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += format_double(xs[i]);
  }
  return out;
}

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> names{"run",       "compare", "refine", "order",
                                              "stability", "fig1",    "fig2"};
  return names;
}

std::filesystem::path default_out_dir(std::string_view command) {
  const char* env = std::getenv("ODEVERIFY_OUT_DIR");
  const std::filesystem::path base = (env && *env) ? env : "odeverify-out";
  return base / std::string(command);
}

// Smallest interval that is an integer multiple of both steps.
double common_interval(double a, double b) {
  for (int m = 1; m <= 100000; ++m) {
    const double candidate = m * a;
    const double ratio = candidate / b;
    const double nearest = std::round(ratio);
    if (nearest >= 1.0 && std::abs(nearest * b - candidate) <= 1e-9 * candidate) return candidate;
  }
  throw ConfigError("steps " + format_double(a) + " and " + format_double(b) +
                    " share no common output grid");
}

void validate(const ExperimentConfig& c, const QuadraticOdeSystem& sys) {
  const auto spec = IntegratorSpec::parse(c.method, c.dt);
  if (c.initial_state.size() != sys.dimension()) {
    throw ConfigError("u0 has " + std::to_string(c.initial_state.size()) + " components, model '" +
                      c.model + "' needs " + std::to_string(sys.dimension()));
  }
  require_finite(c.initial_state, "u0");
  if (c.norm.kind == NormKind::Kind::Component && c.norm.component >= sys.dimension()) {
    throw ConfigError("norm component out of range for model '" + c.model + "'");
  }
  if (!(c.threshold > 0.0)) throw ConfigError("threshold must be > 0");
  if (!(c.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (!(c.floor > 0.0) || !(c.ceiling > c.floor)) {
    throw ConfigError("growth window needs 0 < floor < ceiling");
  }

  const std::string& cmd = c.command;
  if (cmd == "run" || cmd == "stability") {
    (void)make_time_grid(spec.dt(), c.t_end, c.output_interval);
  } else if (cmd == "compare" || cmd == "fig2") {
    (void)IntegratorSpec::parse(c.method2, c.dt2);
    (void)make_time_grid(c.dt, c.t_end, c.output_interval);
    (void)make_time_grid(c.dt2, c.t_end, c.output_interval);
  } else if (cmd == "refine") {
    if (c.ratio < 2) throw ConfigError("ratio must be an integer >= 2");
    if (c.max_levels < 1) throw ConfigError("max_levels must be >= 1");
    (void)make_time_grid(c.dt, c.t_end, c.output_interval);
  } else if (cmd == "order") {
    if (!sys.has_exact_solution()) {
      throw ConfigError("order needs a model with an exact solution; '" + c.model + "' has none");
    }
    if (c.dt_ladder.size() < 3) throw ConfigError("dt_ladder needs at least 3 entries");
    for (std::size_t i = 0; i < c.dt_ladder.size(); ++i) {
      if (i > 0 && !(c.dt_ladder[i] < c.dt_ladder[i - 1])) {
        throw ConfigError("dt_ladder must be strictly decreasing");
      }
      (void)make_time_grid(c.dt_ladder[i], c.t_probe, c.t_probe);
    }
  } else if (cmd == "fig1") {
    if (!sys.has_exact_solution()) {
      throw ConfigError("fig1 needs a model with an exact solution; '" + c.model + "' has none");
    }
    (void)IntegratorSpec::parse(c.method2, c.dt2);
    (void)make_time_grid(c.dt, c.t_end, c.dt);
    (void)make_time_grid(c.dt2, c.t_end, c.dt2);
    const double common = common_interval(c.dt, c.dt2);
    (void)make_time_grid(c.dt, c.t_end, common);
    (void)make_time_grid(c.dt2, c.t_end, common);
    // The exact curve is sampled on its own grid; only divisibility of t_end matters.
    (void)make_time_grid(c.output_interval, c.t_end, c.output_interval);
  }
}

}  // namespace

double common_output_interval(double a, double b) { return common_interval(a, b); }

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "command", "model",     "u0",         "method",    "method2",   "dt",
      "dt2",     "t_end",     "out_interval", "norm",    "epsilon",   "threshold",
      "ratio",   "max_levels", "scale",     "dt_ladder", "t_probe",   "floor",
      "ceiling", "out_dir"};
  return keys;
}

KeyValues parse_config_text(std::string_view text) {
  KeyValues out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    out[key] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

KeyValues load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

KeyValues command_defaults(std::string_view command) {
  if (std::find(known_commands().begin(), known_commands().end(), command) ==
      known_commands().end()) {
    throw UsageError("unknown command '" + std::string(command) + "'");
  }
  KeyValues d{{"command", std::string(command)},
              {"model", "linear-decay"},
              {"method", "euler"},
              {"method2", "euler"},
              {"dt", "0.05"},
              {"t_end", "1"},
              {"norm", "inf"},
              {"epsilon", "1e-06"},
              {"threshold", "0.01"},
              {"ratio", "2"},
              {"max_levels", "20"},
              {"scale", "desk"},
              {"dt_ladder", "0.01,0.005,0.0025,0.00125"},
              {"t_probe", "0.1"},
              {"floor", "1e-12"},
              {"ceiling", "0.01"},
              {"out_dir", default_out_dir(command).string()}};
  if (command == "compare") {
    d["model"] = "lorenz1990";
    d["method"] = "taylor:5";
    d["method2"] = "rk4";
    d["dt"] = "0.0001";
    d["t_end"] = "50";
    d["out_interval"] = "0.01";
  } else if (command == "refine") {
    d["dt"] = "0.1";
  } else if (command == "stability") {
    d["model"] = "lorenz1990";
    d["method"] = "taylor:5";
    d["dt"] = "0.001";
    d["t_end"] = "50";
    d["out_interval"] = "0.01";
  } else if (command == "fig1") {
    d["dt2"] = "0.06";
    d["t_end"] = "0.6";
    d["out_interval"] = "0.01";
  } else if (command == "fig2") {
    d["model"] = "lorenz1990";
    d["method"] = "taylor:5";
    d["method2"] = "taylor:5";
    d["dt"].clear();
    d["t_end"] = "50";
    d["out_interval"] = "0.01";
    d["norm"] = "component:0";
  }
  return d;
}

ExperimentConfig resolve_config(std::string_view command, const KeyValues& file,
                                const KeyValues& overrides) {
  KeyValues kv = command_defaults(command);
  for (const auto& [k, v] : file) kv[k] = v;
  for (const auto& [k, v] : overrides) kv[k] = v;
  kv["command"] = std::string(command);
  auto has = [&kv](const std::string& k) { return kv.count(k) && !kv.at(k).empty(); };

  ExperimentConfig c;
  c.command = std::string(command);
  c.model = kv["model"];
  const QuadraticOdeSystem sys = [&c] {
    try {
      return build_model(c.model);
    } catch (const UsageError& e) {
      throw ConfigError(e.what());
    }
  }();

  c.method = kv["method"];
  c.method2 = kv["method2"];

  const std::string scale = kv["scale"];
  if (scale == "desk") {
    c.scale = Fig2Scale::Desk;
  } else if (scale == "paper") {
    c.scale = Fig2Scale::Paper;
  } else {
    throw ConfigError("scale must be 'desk' or 'paper', got '" + scale + "'");
  }
  if (command == "fig2") {
    if (!has("dt")) kv["dt"] = c.scale == Fig2Scale::Desk ? "0.0001" : "1e-06";
    if (!has("dt2")) kv["dt2"] = c.scale == Fig2Scale::Desk ? "1e-05" : "1e-07";
  }

  c.dt = parse_double("dt", kv["dt"]);
  c.dt2 = has("dt2") ? parse_double("dt2", kv["dt2"]) : c.dt;
  c.t_end = parse_double("t_end", kv["t_end"]);
  c.output_interval = has("out_interval") ? parse_double("out_interval", kv["out_interval"]) : c.dt;
  c.initial_state = has("u0") ? parse_list("u0", kv["u0"]) : sys.default_initial_state();
  try {
    c.norm = NormKind::parse(kv["norm"]);
  } catch (const UsageError& e) {
    throw ConfigError(e.what());
  }
  c.epsilon = parse_double("epsilon", kv["epsilon"]);
  c.threshold = parse_double("threshold", kv["threshold"]);
  c.ratio = parse_int("ratio", kv["ratio"]);
  c.max_levels = parse_int("max_levels", kv["max_levels"]);
  c.dt_ladder = parse_list("dt_ladder", kv["dt_ladder"]);
  c.t_probe = parse_double("t_probe", kv["t_probe"]);
  c.floor = parse_double("floor", kv["floor"]);
  c.ceiling = parse_double("ceiling", kv["ceiling"]);
  c.out_dir = kv["out_dir"];

  try {
    validate(c, sys);
  } catch (const UsageError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

std::string_view to_string(Fig2Scale s) { return s == Fig2Scale::Desk ? "desk" : "paper"; }

KeyValues to_key_values(const ExperimentConfig& c) {
  return {{"command", c.command},
          {"model", c.model},
          {"u0", join(c.initial_state)},
          {"method", c.method},
          {"method2", c.method2},
          {"dt", format_double(c.dt)},
          {"dt2", format_double(c.dt2)},
          {"t_end", format_double(c.t_end)},
          {"out_interval", format_double(c.output_interval)},
          {"norm", c.norm.name()},
          {"epsilon", format_double(c.epsilon)},
          {"threshold", format_double(c.threshold)},
          {"ratio", std::to_string(c.ratio)},
          {"max_levels", std::to_string(c.max_levels)},
          {"scale", std::string(to_string(c.scale))},
          {"dt_ladder", join(c.dt_ladder)},
          {"t_probe", format_double(c.t_probe)},
          {"floor", format_double(c.floor)},
          {"ceiling", format_double(c.ceiling)},
          {"out_dir", c.out_dir.string()}};
}

std::string serialize_config(const ExperimentConfig& c) {
  const KeyValues kv = to_key_values(c);
  std::string out = "# resolved odeverify configuration\n";
  for (const auto& key : config_keys()) out += key + " = " + kv.at(key) + "\n";
  return out;
}

}  // namespace odeverify
