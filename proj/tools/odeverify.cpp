// odeverify: fixed-step ODE integration with convergence checks.
//
//   odeverify models
//   odeverify run --model linear-decay --method euler --dt 0.05 --t-end 0.3
//   odeverify fig1
//   odeverify fig2 --scale desk
//   odeverify refine --dt 0.1 --ratio 2 --epsilon 1e-4
//
// Settings are layered: built-in defaults, then --config FILE, then flags.
// Exit codes: 0 success, 1 refine did not converge, 2 usage/config error.

#include <exception>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "odeverify/config.hpp"
#include "odeverify/errors.hpp"
#include "odeverify/harness.hpp"

namespace {

struct FlagSpec {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr FlagSpec kFlags[] = {
    {"--model", "model", "model name (see `odeverify models`)"},
    {"--u0", "u0", "initial state override, comma-separated"},
    {"--method", "method", "euler | rk4 | taylor:<p>"},
    {"--method2", "method2", "second method for compare/fig1/fig2"},
    {"--dt", "dt", "step size"},
    {"--dt2", "dt2", "second step size for pair comparisons"},
    {"--t-end", "t_end", "integration horizon"},
    {"--out-interval", "out_interval", "output sampling interval (multiple of dt)"},
    {"--norm", "norm", "inf | euclidean | component:<i>"},
    {"--epsilon", "epsilon", "refinement convergence tolerance"},
    {"--threshold", "threshold", "divergence onset threshold"},
    {"--ratio", "ratio", "refinement ratio (integer >= 2)"},
    {"--max-levels", "max_levels", "maximum refinement levels"},
    {"--scale", "scale", "fig2 scale: desk | paper"},
    {"--dt-ladder", "dt_ladder", "order: comma-separated decreasing steps"},
    {"--t-probe", "t_probe", "order: probe time"},
    {"--floor", "floor", "growth fit window floor"},
    {"--ceiling", "ceiling", "growth fit window ceiling"},
    {"--out-dir", "out_dir", "output directory (default $ODEVERIFY_OUT_DIR/<command>)"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-step ODE integration with convergence verification"};
  app.require_subcommand(1);

  std::map<std::string, std::string> values;
  std::map<CLI::App*, std::string> config_paths;
  std::map<std::string, CLI::App*> subs;

  subs["models"] = app.add_subcommand("models", "list registered models");
  const std::pair<const char*, const char*> commands[] = {
      {"run", "integrate one configuration and write its trajectory"},
      {"compare", "run two methods/steps and write their pairwise difference"},
      {"refine", "successively refine dt until two levels agree within epsilon"},
      {"order", "estimate the observed order of convergence against the exact solution"},
      {"stability", "classify local stability along a trajectory"},
      {"fig1", "two Euler steps against the exact decay solution"},
      {"fig2", "step-pair divergence on the Lorenz 1990 model"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    subs[name] = sub;
    for (const auto& f : kFlags) sub->add_option(f.flag, values[f.key], f.help);
    sub->add_option("--config", config_paths[sub], "key = value config file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return odeverify::kExitUsage;
  }

  if (subs["models"]->parsed()) {
    std::cout << odeverify::list_models();
    return odeverify::kExitOk;
  }

  for (const auto& [name, sub] : subs) {
    if (!sub->parsed() || name == "models") continue;
    try {
      odeverify::KeyValues file;
      if (!config_paths[sub].empty()) file = odeverify::load_config_file(config_paths[sub]);
      odeverify::KeyValues overrides;
      for (const auto& f : kFlags) {
        if (sub->count(f.flag) > 0) overrides[f.key] = values[f.key];
      }
      const auto config = odeverify::resolve_config(name, file, overrides);
      const auto result = odeverify::run_command(config);
      std::cout << result.summary << "output: " << config.out_dir.string() << "\n";
      return result.exit_code;
    } catch (const odeverify::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return odeverify::kExitUsage;
    } catch (const odeverify::UsageError& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return odeverify::kExitUsage;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return odeverify::kExitUsage;
    }
  }
  return odeverify::kExitUsage;
}
