#include "odeverify/ode_system.hpp"

#include <cmath>
#include <utility>

#include "odeverify/errors.hpp"

namespace odeverify {

Matrix::Matrix(std::size_t n, std::vector<double> row_major) : n_(n), data_(std::move(row_major)) {
  if (data_.size() != n * n) {
    throw UsageError("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                     std::to_string(n * n));
  }
}

void require_finite(std::span<const double> u, std::string_view what) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i])) {
      throw UsageError(std::string(what) + ": component " + std::to_string(i) + " is not finite");
    }
  }
}

void require_state(const QuadraticOdeSystem& system, std::span<const double> u) {
  if (u.size() != system.dimension()) {
    throw UsageError("state has dimension " + std::to_string(u.size()) + " but model '" +
                     system.name() + "' has dimension " + std::to_string(system.dimension()));
  }
  require_finite(u, "state");
}

QuadraticOdeSystem::QuadraticOdeSystem(std::string name, StateVector constant, Matrix linear,
                                       std::vector<double> quadratic, StateVector default_initial,
                                       std::optional<ExactSolution> exact)
    : name_(std::move(name)),
      n_(constant.size()),
      c_(std::move(constant)),
      l_(std::move(linear)),
      q_(std::move(quadratic)),
      u0_(std::move(default_initial)),
      exact_(std::move(exact)) {
  if (n_ == 0) throw UsageError("system dimension must be at least 1");
  if (l_.size() != n_) throw UsageError("linear coefficient matrix has wrong dimension");
  if (q_.size() != n_ * n_ * n_) throw UsageError("quadratic coefficient tensor has wrong size");
  if (u0_.size() != n_) throw UsageError("default initial state has wrong dimension");
  require_finite(c_, "constant term");
  require_finite(l_.data(), "linear coefficients");
  require_finite(q_, "quadratic coefficients");
  require_finite(u0_, "default initial state");

  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t k = j + 1; k < n_; ++k) {
        double& a = q_[(i * n_ + j) * n_ + k];
        double& b = q_[(i * n_ + k) * n_ + j];
        const double s = 0.5 * (a + b);
        a = s;
        b = s;
      }
    }
  }

  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (l_(i, j) != 0.0) linear_terms_.push_back({i, j, l_(i, j)});
      for (std::size_t k = 0; k < n_; ++k) {
        const double q = q_[(i * n_ + j) * n_ + k];
        if (q != 0.0) quadratic_terms_.push_back({i, j, k, q});
      }
    }
  }
}

void QuadraticOdeSystem::evaluate(std::span<const double> u, std::span<double> out) const noexcept {
  for (std::size_t i = 0; i < n_; ++i) out[i] = c_[i];
  for (const auto& t : linear_terms_) out[t.row] += t.coef * u[t.col];
  for (const auto& t : quadratic_terms_) out[t.row] += t.coef * u[t.j] * u[t.k];
}

StateVector rhs(const QuadraticOdeSystem& system, std::span<const double> u) {
  require_state(system, u);
  StateVector out(system.dimension());
  system.evaluate(u, out);
  return out;
}

Matrix jacobian(const QuadraticOdeSystem& system, std::span<const double> u) {
  require_state(system, u);
  const std::size_t n = system.dimension();
  Matrix j(n);
  for (const auto& t : system.linear_terms()) j(t.row, t.col) += t.coef;
  for (const auto& t : system.quadratic_terms()) j(t.row, t.j) += 2.0 * t.coef * u[t.k];
  return j;
}

StateVector exact_solution(const QuadraticOdeSystem& system, double t) {
  return exact_solution(system, t, system.default_initial_state());
}

StateVector exact_solution(const QuadraticOdeSystem& system, double t, const StateVector& u0) {
  if (!system.has_exact_solution()) throw NoExactSolutionError(system.name());
  if (!(t >= 0.0) || !std::isfinite(t)) throw UsageError("exact solution requires finite t >= 0");
  require_state(system, u0);
  return system.exact()->evaluate(t, u0);
}

QuadraticOdeSystem build_linear_decay() {
  constexpr double kRate = -10.0;
  ExactSolution exact{"linear-decay", [](double t, const StateVector& u0) {
                        return StateVector{u0[0] * std::exp(kRate * t)};
                      }};
  return QuadraticOdeSystem("linear-decay", {0.0}, Matrix(1, {kRate}), {0.0}, {1.0},
                            std::move(exact));
}

QuadraticOdeSystem build_lorenz1990() {
  constexpr std::size_t n = 3;
  std::vector<double> q(n * n * n, 0.0);
  auto at = [&q](std::size_t i, std::size_t j, std::size_t k) -> double& {
    return q[(i * n + j) * n + k];
  };
  constexpr std::size_t x = 0, y = 1, z = 2;
  // Cross terms are stored on one side only; construction symmetrizes.
  at(x, y, y) = -1.0;
  at(x, z, z) = -1.0;
  at(y, x, y) = 1.0;
  at(y, x, z) = -4.0;
  at(z, x, y) = 4.0;
  at(z, x, z) = 1.0;

  Matrix l(n, {-0.25, 0.0, 0.0,
               0.0, -1.0, 0.0,
               0.0, 0.0, -1.0});
  return QuadraticOdeSystem("lorenz1990", {2.0, 1.0, 0.0}, std::move(l), std::move(q),
                            {2.0, 1.0, 0.0});
}

std::vector<std::string> model_names() { return {"linear-decay", "lorenz1990"}; }

QuadraticOdeSystem build_model(std::string_view name) {
  if (name == "linear-decay") return build_linear_decay();
  if (name == "lorenz1990") return build_lorenz1990();
  throw UsageError("unknown model '" + std::string(name) + "' (known: linear-decay, lorenz1990)");
}

}  // namespace odeverify
