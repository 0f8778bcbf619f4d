#pragma once

#include <string_view>
#include <vector>

#include "odeverify/integrators.hpp"
#include "odeverify/ode_system.hpp"

namespace odeverify {

enum class AmplificationRegime { MonotoneStable, OscillatoryStable, Marginal, Unstable };

/// Per-step multiplier g = 1 + lambda * dt of explicit Euler on du/dt = lambda u.
struct AmplificationReport {
  double lambda;
  double dt;
  double factor;
  AmplificationRegime regime;
};

[[nodiscard]] AmplificationReport scalar_amplification(double lambda, double dt);

[[nodiscard]] std::string_view to_string(AmplificationRegime regime);

/// Largest real part over the eigenvalues of J, for n in {1, 2, 3}. The 3x3
/// case solves the characteristic cubic in closed form (trigonometric branch
/// for three real roots, Cardano otherwise) and polishes the real root with
/// Newton. Throws UnsupportedDimensionError for n > 3.
[[nodiscard]] double max_real_eigenvalue(const Matrix& j);

enum class LocalClass { LocallyStable, LocallyUnstable, Marginal };

[[nodiscard]] std::string_view to_string(LocalClass c);

/// Half-width of the band around zero that counts as marginal.
inline constexpr double kMarginalTolerance = 1e-10;

struct LocalClassification {
  double t;
  double max_real_part;
  LocalClass classification;
};

[[nodiscard]] LocalClass classify(double max_real_part);

/// Local-linearization class (sign of the leading eigenvalue real part of the
/// Jacobian) at every sample of `trajectory`, in sample order.
[[nodiscard]] std::vector<LocalClassification> classify_along(const QuadraticOdeSystem& system,
                                                              const Trajectory& trajectory);

}  // namespace odeverify
