#include "odeverify/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "odeverify/errors.hpp"

namespace odeverify {

namespace {

void require_step(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw UsageError("step size must be finite and > 0, got " + std::to_string(dt));
  }
}

void require_order(int order) {
  if (order < 1 || order > kMaxTaylorOrder) {
    throw UsageError("Taylor order must be in [1, " + std::to_string(kMaxTaylorOrder) + "], got " +
                     std::to_string(order));
  }
}

// Reusable scratch for one method on one system, so the driver loop does
// not allocate.
class Stepper {
 public:
  Stepper(const QuadraticOdeSystem& system, const IntegratorSpec& spec)
      : sys_(system), spec_(spec), n_(system.dimension()) {
    switch (spec_.method()) {
      case Method::ExplicitEuler:
        work_.resize(n_);
        break;
      case Method::ClassicalRK4:
        work_.resize(5 * n_);
        break;
      case Method::TaylorSeries:
        work_.resize(static_cast<std::size_t>(spec_.expected_order() + 1) * n_);
        break;
    }
  }

  void advance(std::span<double> u) {
    switch (spec_.method()) {
      case Method::ExplicitEuler:
        euler(u);
        break;
      case Method::ClassicalRK4:
        rk4(u);
        break;
      case Method::TaylorSeries:
        taylor(u);
        break;
    }
  }

  // Fills work_ with the p+1 Taylor coefficients at u, row k at offset k*n.
  void coefficients(std::span<const double> u, int order) {
    const std::size_t n = n_;
    double* a = work_.data();
    for (std::size_t i = 0; i < n; ++i) a[i] = u[i];
    for (int k = 0; k < order; ++k) {
      const double* ak = a + static_cast<std::size_t>(k) * n;
      double* next = a + static_cast<std::size_t>(k + 1) * n;
      for (std::size_t i = 0; i < n; ++i) next[i] = (k == 0) ? sys_.constant()[i] : 0.0;
      for (const auto& t : sys_.linear_terms()) next[t.row] += t.coef * ak[t.col];
      for (const auto& t : sys_.quadratic_terms()) {
        for (int m = 0; m <= k; ++m) {
          const double* am = a + static_cast<std::size_t>(m) * n;
          const double* akm = a + static_cast<std::size_t>(k - m) * n;
          next[t.row] += t.coef * am[t.j] * akm[t.k];
        }
      }
      const double denom = static_cast<double>(k + 1);
      for (std::size_t i = 0; i < n; ++i) next[i] /= denom;
    }
  }

  [[nodiscard]] std::span<const double> coefficient(int k) const {
    return {work_.data() + static_cast<std::size_t>(k) * n_, n_};
  }

 private:
  void euler(std::span<double> u) {
    const double dt = spec_.dt();
    sys_.evaluate(u, work_);
    for (std::size_t i = 0; i < n_; ++i) u[i] = u[i] + dt * work_[i];
  }

  void rk4(std::span<double> u) {
    const double dt = spec_.dt();
    const double half = 0.5 * dt;
    std::span<double> k1(work_.data(), n_), k2(work_.data() + n_, n_),
        k3(work_.data() + 2 * n_, n_), k4(work_.data() + 3 * n_, n_),
        tmp(work_.data() + 4 * n_, n_);
    sys_.evaluate(u, k1);
    for (std::size_t i = 0; i < n_; ++i) tmp[i] = u[i] + half * k1[i];
    sys_.evaluate(tmp, k2);
    for (std::size_t i = 0; i < n_; ++i) tmp[i] = u[i] + half * k2[i];
    sys_.evaluate(tmp, k3);
    for (std::size_t i = 0; i < n_; ++i) tmp[i] = u[i] + dt * k3[i];
    sys_.evaluate(tmp, k4);
    const double sixth = dt / 6.0;
    for (std::size_t i = 0; i < n_; ++i) {
      u[i] = u[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }

  void taylor(std::span<double> u) {
    const int p = spec_.expected_order();
    const double dt = spec_.dt();
    coefficients(u, p);
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = work_[static_cast<std::size_t>(p) * n_ + i];
      for (int k = p - 1; k >= 0; --k) acc = acc * dt + work_[static_cast<std::size_t>(k) * n_ + i];
      u[i] = acc;
    }
  }

  const QuadraticOdeSystem& sys_;
  IntegratorSpec spec_;
  std::size_t n_;
  std::vector<double> work_;
};

bool out_of_range(std::span<const double> u) {
  for (double x : u) {
    if (!std::isfinite(x) || std::abs(x) > kOverflowLimit) return true;
  }
  return false;
}

std::int64_t exact_ratio(double whole, double part, const char* whole_name, const char* part_name) {
  const double ratio = whole / part;
  if (!std::isfinite(ratio) || ratio > 9.0e15) {
    throw ConfigError(std::string(whole_name) + " / " + part_name + " is out of range");
  }
  const auto count = static_cast<std::int64_t>(std::llround(ratio));
  const double rebuilt = static_cast<double>(count) * part;
  if (std::abs(rebuilt - whole) > 1e-9 * std::max(std::abs(whole), part)) {
    throw ConfigError(std::string(whole_name) + " (" + std::to_string(whole) +
                      ") is not an integer multiple of " + part_name + " (" +
                      std::to_string(part) + ")");
  }
  return count;
}

}  // namespace

IntegratorSpec::IntegratorSpec(Method m, int order, double dt) : method_(m), order_(order), dt_(dt) {
  require_step(dt);
}

IntegratorSpec IntegratorSpec::euler(double dt) { return {Method::ExplicitEuler, 1, dt}; }

IntegratorSpec IntegratorSpec::rk4(double dt) { return {Method::ClassicalRK4, 4, dt}; }

IntegratorSpec IntegratorSpec::taylor(int order, double dt) {
  require_order(order);
  return {Method::TaylorSeries, order, dt};
}

IntegratorSpec IntegratorSpec::parse(std::string_view method, double dt) {
  if (method == "euler") return euler(dt);
  if (method == "rk4") return rk4(dt);
  constexpr std::string_view prefix = "taylor:";
  if (method.starts_with(prefix)) {
    const std::string digits(method.substr(prefix.size()));
    std::size_t used = 0;
    int order = 0;
    try {
      order = std::stoi(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (digits.empty() || used != digits.size()) {
      throw UsageError("bad Taylor order in method '" + std::string(method) + "'");
    }
    return taylor(order, dt);
  }
  throw UsageError("unknown method '" + std::string(method) + "' (expected euler, rk4, taylor:<p>)");
}

std::string IntegratorSpec::method_name() const {
  switch (method_) {
    case Method::ExplicitEuler:
      return "euler";
    case Method::ClassicalRK4:
      return "rk4";
    case Method::TaylorSeries:
      return "taylor:" + std::to_string(order_);
  }
  return "unknown";
}

IntegratorSpec IntegratorSpec::with_dt(double dt) const { return {method_, order_, dt}; }

StateVector euler_step(const QuadraticOdeSystem& system, std::span<const double> u, double dt) {
  return step(system, u, IntegratorSpec::euler(dt));
}

StateVector rk4_step(const QuadraticOdeSystem& system, std::span<const double> u, double dt) {
  return step(system, u, IntegratorSpec::rk4(dt));
}

StateVector taylor_step(const QuadraticOdeSystem& system, std::span<const double> u, double dt,
                        int order) {
  return step(system, u, IntegratorSpec::taylor(order, dt));
}

std::vector<StateVector> taylor_coefficients(const QuadraticOdeSystem& system,
                                             std::span<const double> u, int order) {
  require_order(order);
  require_state(system, u);
  // dt is unused when only the coefficients are wanted.
  Stepper stepper(system, IntegratorSpec::taylor(order, 1.0));
  stepper.coefficients(u, order);
  std::vector<StateVector> out;
  out.reserve(static_cast<std::size_t>(order) + 1);
  for (int k = 0; k <= order; ++k) {
    const auto row = stepper.coefficient(k);
    out.emplace_back(row.begin(), row.end());
  }
  return out;
}

StateVector step(const QuadraticOdeSystem& system, std::span<const double> u,
                 const IntegratorSpec& spec) {
  require_state(system, u);
  StateVector next(u.begin(), u.end());
  Stepper stepper(system, spec);
  stepper.advance(next);
  return next;
}

TimeGrid make_time_grid(double dt, double t_end, double output_interval) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be finite and > 0");
  if (!(output_interval > 0.0) || !std::isfinite(output_interval)) {
    throw ConfigError("output interval must be finite and > 0");
  }
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be finite and >= 0");
  TimeGrid grid{};
  grid.steps_per_sample = exact_ratio(output_interval, dt, "output interval", "dt");
  if (grid.steps_per_sample < 1) throw ConfigError("output interval is shorter than dt");
  grid.sample_count = exact_ratio(t_end, output_interval, "t_end", "output interval");
  return grid;
}

Trajectory integrate(const QuadraticOdeSystem& system, const StateVector& u0,
                     const IntegratorSpec& spec, double t_end, double output_interval) {
  require_state(system, u0);
  const TimeGrid grid = make_time_grid(spec.dt(), t_end, output_interval);

  Trajectory traj{system.name(), u0, spec, output_interval, {}, Termination::None};
  traj.samples.reserve(static_cast<std::size_t>(grid.sample_count) + 1);
  traj.samples.push_back({0.0, u0});

  Stepper stepper(system, spec);
  StateVector u = u0;
  for (std::int64_t k = 1; k <= grid.sample_count; ++k) {
    for (std::int64_t s = 0; s < grid.steps_per_sample; ++s) {
      stepper.advance(u);
      if (out_of_range(u)) {
        traj.terminated_early = Termination::Overflow;
        return traj;
      }
    }
    traj.samples.push_back({static_cast<double>(k) * output_interval, u});
  }
  return traj;
}

}  // namespace odeverify
