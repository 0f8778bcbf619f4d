#pragma once

#include <string>
#include <vector>

#include "odeverify/config.hpp"
#include "odeverify/convergence.hpp"
#include "odeverify/integrators.hpp"

namespace odeverify {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNotConverged = 1;
inline constexpr int kExitUsage = 2;

struct CommandResult {
  int exit_code = kExitOk;
  /// key = value block, also written to summary.txt.
  std::string summary;
};

/// Euler-style two-step comparison against the closed form.
struct Fig1Result {
  Trajectory run_a;     // own grid (output interval = dt)
  Trajectory run_b;
  Trajectory common_a;  // shared grid
  Trajectory common_b;
  DifferenceSeries pair;
  DifferenceSeries common_error_a;
  DifferenceSeries common_error_b;
  DifferenceSeries error_a;  // on run_a's own grid
  DifferenceSeries error_b;
  std::vector<Sample> exact;
};

struct Fig2Result {
  Trajectory run_a;
  Trajectory run_b;
  DifferenceSeries difference;
  DivergenceReport report;
};

/// Integrates two configurations concurrently; results do not depend on
/// scheduling.
[[nodiscard]] std::pair<Trajectory, Trajectory> integrate_pair(
    const QuadraticOdeSystem& system, const StateVector& u0, const IntegratorSpec& a,
    const IntegratorSpec& b, double t_end, double output_interval);

[[nodiscard]] Fig1Result compute_fig1(const ExperimentConfig& config);
[[nodiscard]] Fig2Result compute_fig2(const ExperimentConfig& config);

/// Registry listing for `odeverify models`.
[[nodiscard]] std::string list_models();

// Each command computes, then writes its CSVs, summary.txt and the resolved
// config.txt into config.out_dir.
[[nodiscard]] CommandResult cmd_run(const ExperimentConfig& config);
[[nodiscard]] CommandResult cmd_compare(const ExperimentConfig& config);
[[nodiscard]] CommandResult cmd_refine(const ExperimentConfig& config);
[[nodiscard]] CommandResult cmd_order(const ExperimentConfig& config);
[[nodiscard]] CommandResult cmd_stability(const ExperimentConfig& config);
[[nodiscard]] CommandResult cmd_fig1(const ExperimentConfig& config);
[[nodiscard]] CommandResult cmd_fig2(const ExperimentConfig& config);

/// Dispatches on config.command.
[[nodiscard]] CommandResult run_command(const ExperimentConfig& config);

}  // namespace odeverify
