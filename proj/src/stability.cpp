#include "odeverify/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "odeverify/errors.hpp"

namespace odeverify {

AmplificationReport scalar_amplification(double lambda, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw UsageError("dt must be finite and > 0");
  if (!std::isfinite(lambda)) throw UsageError("lambda must be finite");
  const double g = 1.0 + lambda * dt;
  const double mag = std::abs(g);
  AmplificationRegime regime;
  if (mag > 1.0) {
    regime = AmplificationRegime::Unstable;
  } else if (mag == 1.0) {
    regime = AmplificationRegime::Marginal;
  } else if (g >= 0.0) {
    regime = AmplificationRegime::MonotoneStable;
  } else {
    regime = AmplificationRegime::OscillatoryStable;
  }
  return {lambda, dt, g, regime};
}

std::string_view to_string(AmplificationRegime regime) {
  switch (regime) {
    case AmplificationRegime::MonotoneStable:
      return "monotone-stable";
    case AmplificationRegime::OscillatoryStable:
      return "oscillatory-stable";
    case AmplificationRegime::Marginal:
      return "marginal";
    case AmplificationRegime::Unstable:
      return "unstable";
  }
  return "unknown";
}

namespace {

// Monic cubic x^3 + a x^2 + b x + c.
struct Cubic {
  double a, b, c;
  [[nodiscard]] double value(double x) const { return ((x + a) * x + b) * x + c; }
  [[nodiscard]] double slope(double x) const { return (3.0 * x + 2.0 * a) * x + b; }
};

double polish(const Cubic& p, double x) {
  for (int it = 0; it < 4; ++it) {
    const double f = p.value(x);
    const double df = p.slope(x);
    if (f == 0.0 || df == 0.0) break;
    const double next = x - f / df;
    if (!std::isfinite(next) || std::abs(p.value(next)) >= std::abs(f)) break;
    x = next;
  }
  return x;
}

double max_real_root_part(const Cubic& poly) {
  const double a = poly.a, b = poly.b, c = poly.c;
  const double shift = a / 3.0;
  // Depressed form x^3 + p x + q with lambda = x - a/3.
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double disc = 0.25 * q * q + p * p * p / 27.0;

  if (disc > 0.0) {
    // One real root and a complex pair.
    const double s = std::sqrt(disc);
    const double big = -std::copysign(std::cbrt(0.5 * std::abs(q) + s), q);
    const double small = (big != 0.0) ? -p / (3.0 * big) : 0.0;
    const double real_root = polish(poly, big + small - shift);
    // The three roots sum to -a.
    const double pair_real = -0.5 * (a + real_root);
    return std::max(real_root, pair_real);
  }

  if (p == 0.0) return polish(poly, -shift);

  // Three real roots; k = 0 of the trigonometric form is the largest.
  const double r = 2.0 * std::sqrt(-p / 3.0);
  const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
  const double theta = std::acos(arg) / 3.0;
  return polish(poly, r * std::cos(theta) - shift);
}

}  // namespace

double max_real_eigenvalue(const Matrix& j) {
  require_finite(j.data(), "matrix");
  switch (j.size()) {
    case 1:
      return j(0, 0);
    case 2: {
      const double half_trace = 0.5 * (j(0, 0) + j(1, 1));
      const double det = j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0);
      const double disc = half_trace * half_trace - det;
      return disc >= 0.0 ? half_trace + std::sqrt(disc) : half_trace;
    }
    case 3: {
      const double trace = j(0, 0) + j(1, 1) + j(2, 2);
      const double minors = j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0) + j(0, 0) * j(2, 2) -
                            j(0, 2) * j(2, 0) + j(1, 1) * j(2, 2) - j(1, 2) * j(2, 1);
      const double det = j(0, 0) * (j(1, 1) * j(2, 2) - j(1, 2) * j(2, 1)) -
                         j(0, 1) * (j(1, 0) * j(2, 2) - j(1, 2) * j(2, 0)) +
                         j(0, 2) * (j(1, 0) * j(2, 1) - j(1, 1) * j(2, 0));
      return max_real_root_part({-trace, minors, -det});
    }
    default:
      throw UnsupportedDimensionError("eigenvalue extraction supports n <= 3, got n = " +
                                      std::to_string(j.size()));
  }
}

std::string_view to_string(LocalClass c) {
  switch (c) {
    case LocalClass::LocallyStable:
      return "locally-stable";
    case LocalClass::LocallyUnstable:
      return "locally-unstable";
    case LocalClass::Marginal:
      return "marginal";
  }
  return "unknown";
}

LocalClass classify(double max_real_part) {
  if (max_real_part > kMarginalTolerance) return LocalClass::LocallyUnstable;
  if (max_real_part < -kMarginalTolerance) return LocalClass::LocallyStable;
  return LocalClass::Marginal;
}

std::vector<LocalClassification> classify_along(const QuadraticOdeSystem& system,
                                                const Trajectory& trajectory) {
  if (trajectory.model != system.name()) {
    throw UsageError("trajectory of model '" + trajectory.model + "' classified against model '" +
                     system.name() + "'");
  }
  std::vector<LocalClassification> out;
  out.reserve(trajectory.samples.size());
  for (const auto& s : trajectory.samples) {
    const double lead = max_real_eigenvalue(jacobian(system, s.state));
    out.push_back({s.t, lead, classify(lead)});
  }
  return out;
}

}  // namespace odeverify
