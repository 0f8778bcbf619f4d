#include "odeverify/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "odeverify/errors.hpp"
#include "odeverify/format.hpp"

namespace odeverify {

namespace {

struct LineFit {
  double slope;
  double intercept;
  double rms;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ss += r * r;
  }
  return {slope, intercept, std::sqrt(ss / n)};
}

}  // namespace

NormKind NormKind::parse(std::string_view text) {
  if (text == "inf") return inf();
  if (text == "euclidean") return euclidean();
  constexpr std::string_view prefix = "component:";
  if (text.starts_with(prefix)) {
    const std::string digits(text.substr(prefix.size()));
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(),
                                       [](char c) { return c >= '0' && c <= '9'; })) {
      return of_component(std::stoul(digits));
    }
  }
  throw UsageError("unknown norm '" + std::string(text) +
                   "' (expected inf, euclidean, component:<i>)");
}

std::string NormKind::name() const {
  switch (kind) {
    case Kind::Inf:
      return "inf";
    case Kind::Euclidean:
      return "euclidean";
    case Kind::Component:
      return "component:" + std::to_string(component);
  }
  return "unknown";
}

double NormKind::apply(std::span<const double> a, std::span<const double> b) const {
  switch (kind) {
    case Kind::Inf: {
      double m = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
      return m;
    }
    case Kind::Euclidean: {
      double s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
      return std::sqrt(s);
    }
    case Kind::Component:
      return std::abs(a[component] - b[component]);
  }
  return 0.0;
}

std::string describe(const Trajectory& t) {
  return t.model + " " + t.spec.method_name() + " dt=" + format_double(t.spec.dt());
}

namespace {

void require_norm_fits(const NormKind& norm, std::size_t n) {
  if (norm.kind == NormKind::Kind::Component && norm.component >= n) {
    throw UsageError("norm component " + std::to_string(norm.component) +
                     " out of range for dimension " + std::to_string(n));
  }
}

}  // namespace

DifferenceSeries pair_difference(const Trajectory& a, const Trajectory& b, NormKind norm) {
  if (a.model != b.model) {
    throw UsageError("cannot compare trajectories of different models ('" + a.model + "' vs '" +
                     b.model + "')");
  }
  if (a.initial_state != b.initial_state) {
    throw UsageError("cannot compare trajectories with different initial states");
  }
  if (a.output_interval != b.output_interval) {
    throw UsageError("cannot compare trajectories on different output grids (" +
                     format_double(a.output_interval) + " vs " + format_double(b.output_interval) +
                     ")");
  }
  require_norm_fits(norm, a.initial_state.size());

  DifferenceSeries out;
  out.norm = norm;
  out.source_a = describe(a);
  out.source_b = describe(b);
  const std::size_t common = std::min(a.samples.size(), b.samples.size());
  out.truncated = a.terminated_early != Termination::None || b.terminated_early != Termination::None;
  out.times.reserve(common);
  out.values.reserve(common);
  for (std::size_t k = 0; k < common; ++k) {
    out.times.push_back(a.samples[k].t);
    out.values.push_back(norm.apply(a.samples[k].state, b.samples[k].state));
  }
  return out;
}

DifferenceSeries error_vs_exact(const QuadraticOdeSystem& system, const Trajectory& a,
                                NormKind norm) {
  if (a.model != system.name()) {
    throw UsageError("trajectory model '" + a.model + "' does not match '" + system.name() + "'");
  }
  if (!system.has_exact_solution()) throw NoExactSolutionError(system.name());
  require_norm_fits(norm, system.dimension());

  DifferenceSeries out;
  out.norm = norm;
  out.source_a = describe(a);
  out.source_b = system.name() + " exact";
  out.truncated = a.terminated_early != Termination::None;
  for (const auto& s : a.samples) {
    out.times.push_back(s.t);
    out.values.push_back(norm.apply(s.state, exact_solution(system, s.t, a.initial_state)));
  }
  return out;
}

DifferenceSeries error_vs_exact(const Trajectory& a, NormKind norm) {
  return error_vs_exact(build_model(a.model), a, norm);
}

std::optional<double> divergence_time(const DifferenceSeries& series, double threshold) {
  if (!(threshold > 0.0)) throw UsageError("divergence threshold must be > 0");
  for (std::size_t k = 0; k < series.values.size(); ++k) {
    if (series.values[k] >= threshold) return series.times[k];
  }
  return std::nullopt;
}

GrowthFit growth_rate(const DifferenceSeries& series, double floor, double ceiling) {
  if (!(floor > 0.0) || !(ceiling > floor)) {
    throw UsageError("growth window needs 0 < floor < ceiling");
  }
  const auto& v = series.values;
  std::size_t begin = 0;
  while (begin < v.size() && v[begin] < floor) ++begin;
  std::size_t end = begin;
  while (end < v.size() && v[end] < ceiling) ++end;

  std::vector<double> ts, logs;
  for (std::size_t k = begin; k < end; ++k) {
    if (v[k] > 0.0) {
      ts.push_back(series.times[k]);
      logs.push_back(std::log(v[k]));
    }
  }
  if (ts.size() < kMinGrowthSamples) {
    throw InsufficientDataError("growth fit window holds " + std::to_string(ts.size()) +
                                " usable samples, need " + std::to_string(kMinGrowthSamples));
  }
  const LineFit fit = fit_line(ts, logs);
  return {fit.slope, ts.front(), ts.back(), fit.rms, ts.size()};
}

DivergenceReport analyze_divergence(const DifferenceSeries& series, double threshold, double floor,
                                    double ceiling) {
  DivergenceReport r{threshold, divergence_time(series, threshold), std::nullopt, floor, ceiling,
                     0.0};
  try {
    r.growth = growth_rate(series, floor, ceiling);
  } catch (const InsufficientDataError&) {
    r.growth = std::nullopt;
  }
  for (std::size_t k = 0; k < series.values.size(); ++k) {
    if (r.onset && series.times[k] >= *r.onset) break;
    r.pre_onset_max = std::max(r.pre_onset_max, series.values[k]);
  }
  return r;
}

RefinementOutcome refine_until_converged(const QuadraticOdeSystem& system, const StateVector& u0,
                                         const IntegratorSpec& coarsest,
                                         const RefinementOptions& options) {
  if (options.ratio < 2) throw UsageError("refinement ratio must be an integer >= 2");
  if (options.max_levels < 1) throw UsageError("max_levels must be >= 1");
  if (!(options.epsilon > 0.0)) throw UsageError("epsilon must be > 0");
  const double dt0 = coarsest.dt();
  const double interval = options.output_interval > 0.0 ? options.output_interval : dt0;

  RefinementOutcome out{{}, false, options.epsilon, dt0,
                        integrate(system, u0, coarsest, options.t_end, interval)};
  out.ladder.push_back(
      {1, dt0, std::nullopt, out.final_trajectory.terminated_early != Termination::None});

  double divisor = 1.0;
  for (int level = 2; level <= options.max_levels; ++level) {
    divisor *= static_cast<double>(options.ratio);
    const double dt = dt0 / divisor;
    Trajectory fine = integrate(system, u0, coarsest.with_dt(dt), options.t_end, interval);
    const bool overflow = fine.terminated_early != Termination::None;
    double max_diff = std::numeric_limits<double>::infinity();
    if (!overflow && out.final_trajectory.terminated_early == Termination::None) {
      const DifferenceSeries d = pair_difference(out.final_trajectory, fine, options.norm);
      max_diff = d.values.empty() ? 0.0 : *std::max_element(d.values.begin(), d.values.end());
    }
    out.ladder.push_back({level, dt, max_diff, overflow});
    out.final_trajectory = std::move(fine);
    out.final_dt = dt;
    if (max_diff < options.epsilon) {
      out.converged = true;
      break;
    }
  }
  return out;
}

OrderEstimate observed_order(const QuadraticOdeSystem& system, const StateVector& u0,
                             const IntegratorSpec& method, std::span<const double> dt_ladder,
                             double t_probe) {
  if (!system.has_exact_solution()) throw NoExactSolutionError(system.name());
  if (dt_ladder.size() < 3) throw UsageError("order ladder needs at least 3 step sizes");
  for (std::size_t i = 1; i < dt_ladder.size(); ++i) {
    if (!(dt_ladder[i] < dt_ladder[i - 1])) {
      throw UsageError("order ladder must be strictly decreasing");
    }
  }
  const StateVector exact = exact_solution(system, t_probe, u0);

  OrderEstimate est{0.0, {}};
  std::vector<double> log_dt, log_err;
  for (double dt : dt_ladder) {
    const Trajectory tr = integrate(system, u0, method.with_dt(dt), t_probe, t_probe);
    double err = std::numeric_limits<double>::infinity();
    if (tr.terminated_early == Termination::None) {
      err = NormKind::inf().apply(tr.samples.back().state, exact);
    }
    const bool used = std::isfinite(err) && err >= kRoundingFloor;
    est.points.push_back({dt, err, used});
    if (used) {
      log_dt.push_back(std::log(dt));
      log_err.push_back(std::log(err));
    }
  }
  if (log_dt.size() < 3) {
    throw InsufficientDataError("only " + std::to_string(log_dt.size()) +
                                " ladder points above the rounding floor");
  }
  est.order = fit_line(log_dt, log_err).slope;
  return est;
}

}  // namespace odeverify
