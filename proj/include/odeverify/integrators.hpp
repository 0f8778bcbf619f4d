#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odeverify/ode_system.hpp"

namespace odeverify {

enum class Method { ExplicitEuler, ClassicalRK4, TaylorSeries };

inline constexpr int kMaxTaylorOrder = 30;

/// Which scheme to run and with what step. Build through the factories so
/// the order/step invariants hold.
class IntegratorSpec {
 public:
  static IntegratorSpec euler(double dt);
  static IntegratorSpec rk4(double dt);
  static IntegratorSpec taylor(int order, double dt);
  /// Accepts "euler", "rk4" or "taylor:<p>".
  static IntegratorSpec parse(std::string_view method, double dt);

  [[nodiscard]] Method method() const noexcept { return method_; }
  [[nodiscard]] double dt() const noexcept { return dt_; }
  /// 1 for Euler, 4 for RK4, p for Taylor(p).
  [[nodiscard]] int expected_order() const noexcept { return order_; }
  [[nodiscard]] std::string method_name() const;

  [[nodiscard]] IntegratorSpec with_dt(double dt) const;

  friend bool operator==(const IntegratorSpec&, const IntegratorSpec&) = default;

 private:
  IntegratorSpec(Method m, int order, double dt);

  Method method_;
  int order_;
  double dt_;
};

enum class Termination { None, Overflow };

struct Sample {
  double t;
  StateVector state;
};

struct Trajectory {
  std::string model;
  StateVector initial_state;
  IntegratorSpec spec;
  double output_interval;
  std::vector<Sample> samples;
  Termination terminated_early = Termination::None;
};

/// |component| above this (or non-finite) stops an integration.
inline constexpr double kOverflowLimit = 1e300;

[[nodiscard]] StateVector euler_step(const QuadraticOdeSystem& system, std::span<const double> u,
                                     double dt);

[[nodiscard]] StateVector rk4_step(const QuadraticOdeSystem& system, std::span<const double> u,
                                   double dt);

/// Taylor coefficients u_0..u_p of the local solution u(t0 + s) = sum_k u_k s^k,
/// from the quadratic convolution recurrence
///   u_{k+1} = (c [k == 0] + L u_k + sum_{m=0..k} Q(u_m, u_{k-m})) / (k + 1).
[[nodiscard]] std::vector<StateVector> taylor_coefficients(const QuadraticOdeSystem& system,
                                                           std::span<const double> u, int order);

/// Sum of the Taylor polynomial at dt, Horner order.
[[nodiscard]] StateVector taylor_step(const QuadraticOdeSystem& system, std::span<const double> u,
                                      double dt, int order);

/// Advances by one step of whatever method `spec` names.
[[nodiscard]] StateVector step(const QuadraticOdeSystem& system, std::span<const double> u,
                               const IntegratorSpec& spec);

/// Step counts derived once from the requested grid.
struct TimeGrid {
  std::int64_t steps_per_sample;
  std::int64_t sample_count;  // samples after t = 0
};

/// Validates that output_interval is an integer multiple of dt and t_end an
/// integer multiple of output_interval. Throws ConfigError otherwise.
[[nodiscard]] TimeGrid make_time_grid(double dt, double t_end, double output_interval);

/// Fixed-step driver. Records u0 at t = 0 and then every output_interval up
/// to t_end, with sample k at exactly k * output_interval. Stops early with
/// Termination::Overflow once any component leaves the finite range or
/// exceeds kOverflowLimit; only finite samples are kept.
[[nodiscard]] Trajectory integrate(const QuadraticOdeSystem& system, const StateVector& u0,
                                   const IntegratorSpec& spec, double t_end,
                                   double output_interval);

}  // namespace odeverify
