#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "odeverify/convergence.hpp"
#include "odeverify/errors.hpp"

using namespace odeverify;

namespace {

Trajectory decay_euler(double dt, double t_end, double interval) {
  return integrate(build_linear_decay(), {1.0}, IntegratorSpec::euler(dt), t_end, interval);
}

DifferenceSeries synthetic(const std::vector<double>& times, const std::vector<double>& values) {
  DifferenceSeries s;
  s.times = times;
  s.values = values;
  return s;
}

DifferenceSeries planted_exponential(double rate, double scale, double dt, double t_end,
                                     std::mt19937_64* noise_rng = nullptr) {
  DifferenceSeries s;
  std::uniform_real_distribution<double> log_factor(std::log(0.5), std::log(2.0));
  const auto n = static_cast<int>(std::llround(t_end / dt));
  for (int k = 0; k <= n; ++k) {
    const double t = k * dt;
    double v = scale * std::exp(rate * t);
    if (noise_rng) v *= std::exp(log_factor(*noise_rng));
    s.times.push_back(t);
    s.values.push_back(v);
  }
  return s;
}

}  // namespace

TEST(NormKind, ParseAndApply) {
  EXPECT_EQ(NormKind::parse("inf"), NormKind::inf());
  EXPECT_EQ(NormKind::parse("euclidean"), NormKind::euclidean());
  EXPECT_EQ(NormKind::parse("component:2"), NormKind::of_component(2));
  EXPECT_EQ(NormKind::parse("component:2").name(), "component:2");
  EXPECT_THROW((void)NormKind::parse("component:"), UsageError);
  EXPECT_THROW((void)NormKind::parse("l1"), UsageError);
  const StateVector a{1.0, -2.0, 3.0}, b{4.0, 2.0, 3.0};
  EXPECT_EQ(NormKind::inf().apply(a, b), 4.0);
  EXPECT_EQ(NormKind::euclidean().apply(a, b), 5.0);
  EXPECT_EQ(NormKind::of_component(0).apply(a, b), 3.0);
}

TEST(PairDifference, IdenticalRunsGiveZero) {
  const auto sys = build_lorenz1990();
  const auto a = integrate(sys, sys.default_initial_state(), IntegratorSpec::taylor(5, 1e-2), 5.0, 0.1);
  const auto d = pair_difference(a, a);
  ASSERT_EQ(d.values.size(), a.samples.size());
  for (double v : d.values) EXPECT_EQ(v, 0.0);
}

TEST(PairDifference, EulerStepsOnCommonGrid) {
  const auto a = decay_euler(0.05, 0.6, 0.3);
  const auto b = decay_euler(0.06, 0.6, 0.3);
  const auto d = pair_difference(a, b);
  ASSERT_EQ(d.values.size(), 3u);
  EXPECT_EQ(d.values[0], 0.0);
  // |0.5^6 - 0.4^5|
  EXPECT_NEAR(d.values[1], 0.005385, 1e-15);
  const auto swapped = pair_difference(b, a);
  EXPECT_EQ(swapped.values, d.values);
}

TEST(PairDifference, RejectsMismatches) {
  const auto a = decay_euler(0.05, 0.6, 0.3);
  const auto other_grid = decay_euler(0.05, 0.6, 0.1);
  EXPECT_THROW((void)pair_difference(a, other_grid), UsageError);
  const auto other_u0 = integrate(build_linear_decay(), {2.0}, IntegratorSpec::euler(0.05), 0.6, 0.3);
  EXPECT_THROW((void)pair_difference(a, other_u0), UsageError);
  const auto sys = build_lorenz1990();
  const auto lorenz = integrate(sys, {2.0, 1.0, 0.0}, IntegratorSpec::euler(0.05), 0.6, 0.3);
  EXPECT_THROW((void)pair_difference(a, lorenz), UsageError);
  EXPECT_THROW((void)pair_difference(lorenz, lorenz, NormKind::of_component(3)), UsageError);
}

TEST(PairDifference, TruncatesAtOverflow) {
  const auto blown = decay_euler(1.0, 400.0, 1.0);
  const auto fine = decay_euler(0.01, 400.0, 1.0);
  const auto d = pair_difference(blown, fine);
  EXPECT_TRUE(d.truncated);
  EXPECT_EQ(d.values.size(), blown.samples.size());
  for (double v : d.values) EXPECT_TRUE(std::isfinite(v));
}

TEST(ErrorVsExact, EulerErrors) {
  const auto a = decay_euler(0.05, 0.3, 0.05);
  const auto e = error_vs_exact(a);
  ASSERT_EQ(e.values.size(), 7u);
  EXPECT_EQ(e.values[0], 0.0);
  // |0.5 - exp(-0.5)|, |0.5^6 - exp(-3)|
  EXPECT_NEAR(e.values[1], 0.106530659712633423603799534991, 1e-15);
  EXPECT_NEAR(e.values[6], 0.0341620683678639429793424156501, 1e-15);
}

TEST(ErrorVsExact, ExactSamplesGiveZero) {
  const auto sys = build_linear_decay();
  Trajectory exact{sys.name(), {1.0}, IntegratorSpec::euler(0.1), 0.1, {}, Termination::None};
  for (int k = 0; k <= 10; ++k) exact.samples.push_back({k * 0.1, exact_solution(sys, k * 0.1)});
  for (double v : error_vs_exact(sys, exact).values) EXPECT_EQ(v, 0.0);
}

TEST(ErrorVsExact, NeedsClosedForm) {
  const auto sys = build_lorenz1990();
  const auto tr = integrate(sys, {2.0, 1.0, 0.0}, IntegratorSpec::euler(0.1), 1.0, 0.1);
  EXPECT_THROW((void)error_vs_exact(tr), NoExactSolutionError);
}

TEST(Convergence, AgreementIsNotAccuracy) {
  // Two Euler runs agree more closely with each other than with the truth.
  const auto a = decay_euler(0.05, 0.6, 0.3);
  const auto b = decay_euler(0.06, 0.6, 0.3);
  const auto gap = pair_difference(a, b);
  const auto ea = error_vs_exact(a);
  const auto eb = error_vs_exact(b);
  for (std::size_t k = 1; k < gap.values.size(); ++k) {
    EXPECT_LT(gap.values[k], ea.values[k]) << "t=" << gap.times[k];
    EXPECT_LT(gap.values[k], eb.values[k]) << "t=" << gap.times[k];
  }
}

TEST(Convergence, BothRunsReachSteadyState) {
  for (double dt : {0.05, 0.06}) {
    const auto tr = decay_euler(dt, 6.0, dt);
    for (const auto& s : tr.samples) {
      if (s.t >= 5.0) {
        EXPECT_LT(std::abs(s.state[0]), 1e-6) << "dt=" << dt << " t=" << s.t;
      }
    }
  }
}

TEST(DivergenceTime, Examples) {
  EXPECT_FALSE(divergence_time(synthetic({0, 1, 2}, {0, 0, 0}), 1e-9).has_value());
  const auto s = synthetic({0, 1, 2, 3}, {0, 1e-8, 1e-3, 0.5});
  EXPECT_EQ(divergence_time(s, 1e-2), 3.0);
  EXPECT_EQ(divergence_time(s, 1e-10), 1.0);
  EXPECT_EQ(divergence_time(s, 0.5), 3.0);
  EXPECT_FALSE(divergence_time(s, 0.6).has_value());
  EXPECT_THROW((void)divergence_time(s, 0.0), UsageError);
}

TEST(DivergenceTime, MonotoneInThreshold) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    DifferenceSeries s;
    for (int k = 0; k < 200; ++k) {
      s.times.push_back(k * 0.1);
      s.values.push_back(std::pow(10.0, -12.0 * u(rng)));
    }
    std::optional<double> prev = divergence_time(s, 1e-12);
    for (double th = 3e-12; th <= 1.0; th *= 3.0) {
      const auto t = divergence_time(s, th);
      if (!prev) {
        EXPECT_FALSE(t.has_value()) << "threshold " << th;
      } else if (t) {
        EXPECT_GE(*t, *prev) << "threshold " << th;
      }
      prev = t;
    }
  }
}

TEST(GrowthRate, RecoversPlantedExponent) {
  const auto s = planted_exponential(0.9, 1e-12, 0.01, 40.0);
  const auto fit = growth_rate(s, 1e-12, 1e-2);
  EXPECT_NEAR(fit.rate, 0.9, 1e-6);
  EXPECT_EQ(fit.t_lo, 0.0);
  EXPECT_LT(fit.t_hi, std::log(1e10) / 0.9);
  EXPECT_LT(fit.residual, 1e-9);
}

TEST(GrowthRate, FlatSeriesHasZeroSlope) {
  const auto s = planted_exponential(0.0, 1e-6, 0.1, 10.0);
  EXPECT_NEAR(growth_rate(s, 1e-12, 1e-2).rate, 0.0, 1e-12);
}

TEST(GrowthRate, ToleratesMultiplicativeNoise) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = planted_exponential(0.9, 1e-12, 0.01, 40.0, &rng);
    EXPECT_NEAR(growth_rate(s, 1e-12, 1e-2).rate, 0.9, 0.1);
  }
}

TEST(GrowthRate, SkipsZerosAndNeedsEnoughSamples) {
  auto s = planted_exponential(0.9, 1e-12, 0.01, 40.0);
  for (std::size_t k = 5; k < s.values.size(); k += 7) s.values[k] = 0.0;
  EXPECT_NEAR(growth_rate(s, 1e-12, 1e-2).rate, 0.9, 1e-6);

  const auto few = synthetic({0, 1, 2, 3, 4}, {1e-10, 1e-9, 1e-8, 1e-7, 1e-6});
  EXPECT_THROW((void)growth_rate(few, 1e-12, 1e-2), InsufficientDataError);
  EXPECT_THROW((void)growth_rate(few, 1e-2, 1e-12), UsageError);
  EXPECT_THROW((void)growth_rate(few, 0.0, 1e-2), UsageError);
}

TEST(AnalyzeDivergence, PreOnsetMaximum) {
  const auto s = planted_exponential(0.9, 1e-12, 0.01, 40.0);
  const auto r = analyze_divergence(s, 1e-2);
  ASSERT_TRUE(r.onset.has_value());
  ASSERT_TRUE(r.growth.has_value());
  EXPECT_LT(r.pre_onset_max, 1e-2);
  EXPECT_GT(r.pre_onset_max, 1e-2 * std::exp(-0.9 * 0.01) * 0.999);
  const auto flat = analyze_divergence(planted_exponential(0.0, 1e-6, 0.1, 10.0), 1e-2);
  EXPECT_FALSE(flat.onset.has_value());
  EXPECT_EQ(flat.pre_onset_max, 1e-6);
}

TEST(Refine, ConvergesOnLinearDecay) {
  const auto sys = build_linear_decay();
  RefinementOptions opt;
  opt.ratio = 2;
  opt.epsilon = 1e-4;
  opt.t_end = 1.0;
  const auto out = refine_until_converged(sys, {1.0}, IntegratorSpec::euler(0.1), opt);
  EXPECT_TRUE(out.converged);
  EXPECT_LE(out.ladder.size(), 12u);
  ASSERT_TRUE(out.ladder.back().max_diff.has_value());
  EXPECT_LT(*out.ladder.back().max_diff, 1e-4);
  EXPECT_EQ(out.final_dt, out.ladder.back().dt);
  EXPECT_FALSE(out.ladder.front().max_diff.has_value());
  for (std::size_t i = 1; i < out.ladder.size(); ++i) {
    EXPECT_EQ(out.ladder[i].dt, out.ladder[i - 1].dt / 2.0);
  }
  // Asymptotically each halving roughly halves the gap.
  for (std::size_t i = 5; i < out.ladder.size(); ++i) {
    const double shrink = *out.ladder[i - 1].max_diff / *out.ladder[i].max_diff;
    EXPECT_GE(shrink, 1.5);
    EXPECT_LE(shrink, 2.5);
  }
  // Converged means close to the truth, not just to the previous level.
  const auto err = error_vs_exact(sys, out.final_trajectory);
  EXPECT_LT(*std::max_element(err.values.begin(), err.values.end()), 10 * opt.epsilon);
}

TEST(Refine, LooseEpsilonStopsAtSecondLevel) {
  RefinementOptions opt;
  opt.epsilon = 10.0;
  const auto out = refine_until_converged(build_linear_decay(), {1.0}, IntegratorSpec::euler(0.1), opt);
  EXPECT_TRUE(out.converged);
  EXPECT_EQ(out.ladder.size(), 2u);
}

TEST(Refine, SingleLevelCannotConverge) {
  RefinementOptions opt;
  opt.max_levels = 1;
  const auto out = refine_until_converged(build_linear_decay(), {1.0}, IntegratorSpec::euler(0.1), opt);
  EXPECT_FALSE(out.converged);
  ASSERT_EQ(out.ladder.size(), 1u);
  EXPECT_FALSE(out.ladder[0].max_diff.has_value());
}

TEST(Refine, OverflowIsRecordedNotFatal) {
  RefinementOptions opt;
  opt.epsilon = 1e-3;
  opt.t_end = 400.0;
  opt.output_interval = 1.0;
  opt.max_levels = 4;
  const auto out = refine_until_converged(build_linear_decay(), {1.0}, IntegratorSpec::euler(1.0), opt);
  EXPECT_FALSE(out.converged);
  ASSERT_EQ(out.ladder.size(), 4u);
  EXPECT_TRUE(out.ladder[0].overflow);
  EXPECT_TRUE(out.ladder[1].overflow);
  EXPECT_TRUE(std::isinf(*out.ladder[1].max_diff));
  EXPECT_FALSE(out.ladder[3].overflow);
}

TEST(Refine, RejectsBadOptions) {
  RefinementOptions opt;
  opt.ratio = 1;
  EXPECT_THROW((void)refine_until_converged(build_linear_decay(), {1.0}, IntegratorSpec::euler(0.1), opt),
               UsageError);
  opt.ratio = 2;
  opt.max_levels = 0;
  EXPECT_THROW((void)refine_until_converged(build_linear_decay(), {1.0}, IntegratorSpec::euler(0.1), opt),
               UsageError);
}

TEST(ObservedOrder, MatchesMethodOrder) {
  const auto sys = build_linear_decay();
  const std::vector<double> ladder{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  EXPECT_NEAR(observed_order(sys, {1.0}, IntegratorSpec::euler(1.0), ladder, 0.1).order, 1.0, 0.1);
  EXPECT_NEAR(observed_order(sys, {1.0}, IntegratorSpec::rk4(1.0), ladder, 0.1).order, 4.0, 0.3);
  EXPECT_NEAR(observed_order(sys, {1.0}, IntegratorSpec::taylor(5, 1.0), ladder, 0.1).order, 5.0, 0.3);
  EXPECT_NEAR(observed_order(sys, {1.0}, IntegratorSpec::taylor(2, 1.0), ladder, 0.1).order, 2.0, 0.2);
}

TEST(ObservedOrder, DropsPointsBelowRoundingFloor) {
  const auto sys = build_linear_decay();
  const std::vector<double> ladder{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  EXPECT_THROW((void)observed_order(sys, {1.0}, IntegratorSpec::taylor(12, 1.0), ladder, 0.1),
               InsufficientDataError);
  const std::vector<double> coarse{0.1, 0.05, 0.025, 0.0125, 0.00625};
  const auto est = observed_order(sys, {1.0}, IntegratorSpec::taylor(8, 1.0), coarse, 0.1);
  EXPECT_FALSE(est.points.back().used);
  EXPECT_TRUE(est.points.front().used);
}

TEST(ObservedOrder, RejectsBadLadders) {
  const auto sys = build_linear_decay();
  const std::vector<double> two{1e-2, 5e-3};
  const std::vector<double> rising{1e-3, 5e-3, 1e-2};
  EXPECT_THROW((void)observed_order(sys, {1.0}, IntegratorSpec::euler(1.0), two, 0.1), UsageError);
  EXPECT_THROW((void)observed_order(sys, {1.0}, IntegratorSpec::euler(1.0), rising, 0.1), UsageError);
  const std::vector<double> ok{1e-2, 5e-3, 2.5e-3};
  EXPECT_THROW((void)observed_order(build_lorenz1990(), {2.0, 1.0, 0.0}, IntegratorSpec::euler(1.0), ok, 0.1),
               NoExactSolutionError);
}
