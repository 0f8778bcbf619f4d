#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "odeverify/errors.hpp"
#include "odeverify/stability.hpp"

using namespace odeverify;

namespace {

// Brute-force oracle: general eigen-decomposition (Hessenberg + QR).
double oracle_max_real(const Matrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = m(i, j);
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  return es.eigenvalues().real().maxCoeff();
}

}  // namespace

TEST(ScalarAmplification, Regimes) {
  auto r = scalar_amplification(-10.0, 0.05);
  EXPECT_EQ(r.factor, 0.5);
  EXPECT_EQ(r.regime, AmplificationRegime::MonotoneStable);

  r = scalar_amplification(-10.0, 0.2);
  EXPECT_EQ(r.factor, -1.0);
  EXPECT_EQ(r.regime, AmplificationRegime::Marginal);

  r = scalar_amplification(-10.0, 0.3);
  EXPECT_EQ(r.factor, -2.0);
  EXPECT_EQ(r.regime, AmplificationRegime::Unstable);

  r = scalar_amplification(-10.0, 0.15);
  EXPECT_NEAR(r.factor, -0.5, 1e-15);
  EXPECT_EQ(r.regime, AmplificationRegime::OscillatoryStable);

  EXPECT_EQ(scalar_amplification(-10.0, 0.1).regime, AmplificationRegime::MonotoneStable);
  EXPECT_EQ(scalar_amplification(0.0, 0.1).regime, AmplificationRegime::Marginal);
  EXPECT_EQ(scalar_amplification(1.0, 0.1).regime, AmplificationRegime::Unstable);
  EXPECT_THROW((void)scalar_amplification(-10.0, 0.0), UsageError);
  EXPECT_EQ(to_string(AmplificationRegime::OscillatoryStable), "oscillatory-stable");
}

TEST(ScalarAmplification, MatchesIntegratedGrowth) {
  const auto sys = build_linear_decay();
  for (double dt : {0.05, 0.15, 0.25}) {
    const double g = std::abs(scalar_amplification(-10.0, dt).factor);
    const auto tr = integrate(sys, {1.0}, IntegratorSpec::euler(dt), 20 * dt, dt);
    for (std::size_t k = 1; k < tr.samples.size(); ++k) {
      const double ratio = std::abs(tr.samples[k].state[0] / tr.samples[k - 1].state[0]);
      EXPECT_NEAR(ratio, g, 1e-12 * g) << "dt=" << dt << " step " << k;
    }
  }
}

TEST(MaxRealEigenvalue, SmallCases) {
  EXPECT_EQ(max_real_eigenvalue(Matrix(1, {-10.0})), -10.0);
  EXPECT_DOUBLE_EQ(max_real_eigenvalue(Matrix(2, {1.0, 2.0, 3.0, 4.0})), (5.0 + std::sqrt(33.0)) / 2);
  EXPECT_DOUBLE_EQ(max_real_eigenvalue(Matrix(2, {0.5, -1.0, 1.0, 0.5})), 0.5);
  EXPECT_DOUBLE_EQ(max_real_eigenvalue(Matrix(3, {-0.25, 0, 0, 0, -1, 0, 0, 0, -1})), -0.25);
  EXPECT_DOUBLE_EQ(max_real_eigenvalue(Matrix(3, {2, 0, 0, 0, 2, 0, 0, 0, 2})), 2.0);
  // Rotation block dominates a decaying direction.
  EXPECT_NEAR(max_real_eigenvalue(Matrix(3, {0.1, -1, 0, 1, 0.1, 0, 0, 0, -3})), 0.1, 1e-14);
  EXPECT_THROW((void)max_real_eigenvalue(Matrix(4)), UnsupportedDimensionError);
  EXPECT_THROW((void)max_real_eigenvalue(Matrix(3, {NAN, 0, 0, 0, 0, 0, 0, 0, 0})), UsageError);
}

TEST(MaxRealEigenvalue, ClosedFormMatchesOracle) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> d(9);
    for (auto& x : d) x = dist(rng);
    const Matrix m(3, d);
    EXPECT_NEAR(max_real_eigenvalue(m), oracle_max_real(m), 1e-8) << "trial " << trial;
  }
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> d(4);
    for (auto& x : d) x = dist(rng);
    const Matrix m(2, d);
    EXPECT_NEAR(max_real_eigenvalue(m), oracle_max_real(m), 1e-10) << "trial " << trial;
  }
}

TEST(MaxRealEigenvalue, SymmetricMatricesThreeRealRoots) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const double a = dist(rng), b = dist(rng), c = dist(rng), d = dist(rng), e = dist(rng),
                 f = dist(rng);
    const Matrix m(3, {a, b, c, b, d, e, c, e, f});
    EXPECT_NEAR(max_real_eigenvalue(m), oracle_max_real(m), 1e-8) << "trial " << trial;
  }
}

TEST(Classify, ThresholdBand) {
  EXPECT_EQ(classify(kMarginalTolerance), LocalClass::Marginal);
  EXPECT_EQ(classify(-kMarginalTolerance), LocalClass::Marginal);
  EXPECT_EQ(classify(0.0), LocalClass::Marginal);
  EXPECT_EQ(classify(2e-10), LocalClass::LocallyUnstable);
  EXPECT_EQ(classify(-2e-10), LocalClass::LocallyStable);
  // Monotone in the leading real part.
  LocalClass last = classify(-1.0);
  for (double x = -1e-9; x <= 1e-9; x += 1e-12) {
    const LocalClass c = classify(x);
    if (c != last) {
      EXPECT_TRUE(std::abs(x) >= kMarginalTolerance - 1e-12 && std::abs(x) <= kMarginalTolerance + 1e-12)
          << x;
    }
    last = c;
  }
}

TEST(ClassifyAlong, LinearDecayAlwaysStable) {
  const auto sys = build_linear_decay();
  const auto tr = integrate(sys, {1.0}, IntegratorSpec::euler(0.01), 1.0, 0.1);
  const auto cls = classify_along(sys, tr);
  ASSERT_EQ(cls.size(), tr.samples.size());
  for (const auto& c : cls) {
    EXPECT_EQ(c.max_real_part, -10.0);
    EXPECT_EQ(c.classification, LocalClass::LocallyStable);
  }
}

TEST(ClassifyAlong, ZeroSystemMarginal) {
  const QuadraticOdeSystem zero("zero", {0.0, 0.0, 0.0}, Matrix(3), std::vector<double>(27),
                                {0.0, 0.0, 0.0});
  const auto tr = integrate(zero, {1.0, 2.0, 3.0}, IntegratorSpec::rk4(0.1), 1.0, 0.1);
  for (const auto& c : classify_along(zero, tr)) EXPECT_EQ(c.classification, LocalClass::Marginal);
}

TEST(ClassifyAlong, LorenzMatchesOracle) {
  const auto sys = build_lorenz1990();
  const auto tr = integrate(sys, sys.default_initial_state(), IntegratorSpec::taylor(5, 1e-2), 50.0, 0.05);
  const auto cls = classify_along(sys, tr);
  ASSERT_EQ(cls.size(), tr.samples.size());
  std::size_t unstable = 0, stable = 0;
  for (std::size_t k = 0; k < cls.size(); ++k) {
    EXPECT_EQ(cls[k].t, tr.samples[k].t);
    const double want = oracle_max_real(jacobian(sys, tr.samples[k].state));
    EXPECT_NEAR(cls[k].max_real_part, want, 1e-8) << "t=" << cls[k].t;
    EXPECT_EQ(cls[k].classification, classify(want)) << "t=" << cls[k].t;
    unstable += cls[k].classification == LocalClass::LocallyUnstable;
    stable += cls[k].classification == LocalClass::LocallyStable;
  }
  // A chaotic run visits both kinds of region.
  EXPECT_GT(unstable, 0u);
  EXPECT_GT(stable, 0u);
}

TEST(ClassifyAlong, RejectsForeignTrajectory) {
  const auto tr = integrate(build_linear_decay(), {1.0}, IntegratorSpec::euler(0.1), 1.0, 0.1);
  EXPECT_THROW((void)classify_along(build_lorenz1990(), tr), UsageError);
}
