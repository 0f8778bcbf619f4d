#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace odeverify {

using StateVector = std::vector<double>;

/// Dense row-major square matrix. Small (n <= a handful) by construction.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  Matrix(std::size_t n, std::vector<double> row_major);

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Closed-form solution u(t) for a given initial state.
struct ExactSolution {
  std::string model;
  std::function<StateVector(double t, const StateVector& u0)> evaluate;
};

/// Nonzero entries of the linear and quadratic coefficients, kept in
/// index-ascending order. Every evaluation walks these lists in order, so
/// results are bit-reproducible.
struct LinearTerm {
  std::size_t row;
  std::size_t col;
  double coef;
};

struct QuadraticTerm {
  std::size_t row;
  std::size_t j;
  std::size_t k;
  double coef;
};

/// Autonomous ODE du/dt = c + L u + Q(u, u), with Q symmetric in its last
/// two indices. Q is passed flat, index (i, j, k) -> i*n*n + j*n + k, and is
/// symmetrized on construction.
class QuadraticOdeSystem {
 public:
  QuadraticOdeSystem(std::string name, StateVector constant, Matrix linear,
                     std::vector<double> quadratic, StateVector default_initial,
                     std::optional<ExactSolution> exact = std::nullopt);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] std::size_t dimension() const noexcept { return n_; }
  [[nodiscard]] const StateVector& constant() const noexcept { return c_; }
  [[nodiscard]] const Matrix& linear() const noexcept { return l_; }
  [[nodiscard]] double quadratic(std::size_t i, std::size_t j, std::size_t k) const {
    return q_[(i * n_ + j) * n_ + k];
  }
  [[nodiscard]] const StateVector& default_initial_state() const noexcept { return u0_; }
  [[nodiscard]] bool has_exact_solution() const noexcept { return exact_.has_value(); }
  [[nodiscard]] const std::optional<ExactSolution>& exact() const noexcept { return exact_; }

  [[nodiscard]] const std::vector<LinearTerm>& linear_terms() const noexcept { return linear_terms_; }
  [[nodiscard]] const std::vector<QuadraticTerm>& quadratic_terms() const noexcept {
    return quadratic_terms_;
  }

  /// Unchecked rhs into a caller-owned buffer. Hot path for the steppers.
  void evaluate(std::span<const double> u, std::span<double> out) const noexcept;

 private:
  std::string name_;
  std::size_t n_;
  StateVector c_;
  Matrix l_;
  std::vector<double> q_;
  StateVector u0_;
  std::optional<ExactSolution> exact_;
  std::vector<LinearTerm> linear_terms_;
  std::vector<QuadraticTerm> quadratic_terms_;
};

/// du/dt = -10 u, u(0) = 1, exact solution u0 * exp(-10 t).
[[nodiscard]] QuadraticOdeSystem build_linear_decay();

/// Lorenz's 1990 three-variable model, default initial state (2, 1, 0):
///   dX/dt = 2 - X/4 - Y^2 - Z^2
///   dY/dt = 1 - Y + XY - 4XZ
///   dZ/dt = -Z + 4XY + XZ
[[nodiscard]] QuadraticOdeSystem build_lorenz1990();

/// Registered model names, in display order.
[[nodiscard]] std::vector<std::string> model_names();

/// Looks a model up by its registry name; throws UsageError when unknown.
[[nodiscard]] QuadraticOdeSystem build_model(std::string_view name);

[[nodiscard]] StateVector rhs(const QuadraticOdeSystem& system, std::span<const double> u);

/// J[i][j] = L[i][j] + 2 sum_k Q[i][j][k] u[k].
[[nodiscard]] Matrix jacobian(const QuadraticOdeSystem& system, std::span<const double> u);

/// Exact solution at time t from the model's default initial state.
[[nodiscard]] StateVector exact_solution(const QuadraticOdeSystem& system, double t);
[[nodiscard]] StateVector exact_solution(const QuadraticOdeSystem& system, double t,
                                         const StateVector& u0);

/// Throws UsageError unless every component is finite.
void require_finite(std::span<const double> u, std::string_view what);

/// Throws UsageError unless u has the system's dimension and is finite.
void require_state(const QuadraticOdeSystem& system, std::span<const double> u);

}  // namespace odeverify
