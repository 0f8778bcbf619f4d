#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odeverify/integrators.hpp"
#include "odeverify/ode_system.hpp"

namespace odeverify {

/// How a state difference is reduced to one non-negative number.
struct NormKind {
  enum class Kind { Inf, Euclidean, Component };
  Kind kind = Kind::Inf;
  std::size_t component = 0;

  static NormKind inf() { return {Kind::Inf, 0}; }
  static NormKind euclidean() { return {Kind::Euclidean, 0}; }
  static NormKind of_component(std::size_t i) { return {Kind::Component, i}; }
  /// "inf", "euclidean" or "component:<i>".
  static NormKind parse(std::string_view text);

  [[nodiscard]] std::string name() const;
  [[nodiscard]] double apply(std::span<const double> a, std::span<const double> b) const;

  friend bool operator==(const NormKind&, const NormKind&) = default;
};

/// |X1 - X2| (or |X - u|) on a common sample grid.
struct DifferenceSeries {
  std::vector<double> times;
  std::vector<double> values;
  NormKind norm;
  std::string source_a;
  std::string source_b;
  /// Set when either input stopped early and the tail was dropped.
  bool truncated = false;
};

/// "model method dt" descriptor used in reports.
[[nodiscard]] std::string describe(const Trajectory& t);

/// Requires the same model, initial state and output interval; methods and
/// steps may differ. Throws UsageError otherwise.
[[nodiscard]] DifferenceSeries pair_difference(const Trajectory& a, const Trajectory& b,
                                               NormKind norm = NormKind::inf());

/// |X(t) - u(t)| against the model's closed form.
[[nodiscard]] DifferenceSeries error_vs_exact(const QuadraticOdeSystem& system,
                                              const Trajectory& a, NormKind norm = NormKind::inf());
/// Resolves the model through the registry.
[[nodiscard]] DifferenceSeries error_vs_exact(const Trajectory& a, NormKind norm = NormKind::inf());

/// First sample time whose value is >= threshold.
[[nodiscard]] std::optional<double> divergence_time(const DifferenceSeries& series,
                                                    double threshold);

inline constexpr std::size_t kMinGrowthSamples = 10;

struct GrowthFit {
  double rate;      // 1/time
  double t_lo;
  double t_hi;
  double residual;  // RMS of ln-residuals
  std::size_t samples;
};

/// Least-squares slope of ln(value) against t, over the samples from the
/// first value >= floor up to (not including) the first later value >=
/// ceiling. Zero values inside the window are skipped. Throws
/// InsufficientDataError with fewer than kMinGrowthSamples usable samples.
[[nodiscard]] GrowthFit growth_rate(const DifferenceSeries& series, double floor, double ceiling);

struct DivergenceReport {
  double threshold;
  std::optional<double> onset;
  std::optional<GrowthFit> growth;
  double floor;
  double ceiling;
  /// max value strictly before onset (over the whole series when no onset)
  double pre_onset_max;
};

[[nodiscard]] DivergenceReport analyze_divergence(const DifferenceSeries& series, double threshold,
                                                  double floor = 1e-12, double ceiling = 1e-2);

struct RefinementOptions {
  int ratio = 2;
  double epsilon = 1e-6;
  double t_end = 1.0;
  /// 0 means "use dt0".
  double output_interval = 0.0;
  NormKind norm = NormKind::inf();
  int max_levels = 20;
};

struct RefinementLevel {
  int level;  // 1-based
  double dt;
  /// Max pairwise difference against the previous level; absent at level 1,
  /// +inf when either run overflowed.
  std::optional<double> max_diff;
  bool overflow;
};

struct RefinementOutcome {
  std::vector<RefinementLevel> ladder;
  bool converged;
  double epsilon;
  double final_dt;
  Trajectory final_trajectory;
};

/// Integrates at dt0, dt0/ratio, dt0/ratio^2, ... comparing each level with
/// the previous one on the shared output grid, until the max difference
/// drops below epsilon or max_levels levels have run.
[[nodiscard]] RefinementOutcome refine_until_converged(const QuadraticOdeSystem& system,
                                                       const StateVector& u0,
                                                       const IntegratorSpec& coarsest,
                                                       const RefinementOptions& options);

/// Errors below this are treated as rounding noise and dropped from the fit.
inline constexpr double kRoundingFloor = 1e-14;

struct OrderPoint {
  double dt;
  double error;
  bool used;
};

struct OrderEstimate {
  double order;
  std::vector<OrderPoint> points;
};

/// Empirical order: slope of ln|error(t_probe)| against ln(dt) over the ladder.
[[nodiscard]] OrderEstimate observed_order(const QuadraticOdeSystem& system, const StateVector& u0,
                                           const IntegratorSpec& method,
                                           std::span<const double> dt_ladder, double t_probe);

}  // namespace odeverify
