#include "odeverify/harness.hpp"

#include <algorithm>
#include <future>
#include <iostream>

#include "odeverify/errors.hpp"
#include "odeverify/format.hpp"
#include "odeverify/report.hpp"
#include "odeverify/stability.hpp"

namespace odeverify {

namespace {

std::string kv_line(const std::string& key, const std::string& value) {
  return key + " = " + value + "\n";
}

std::string kv_line(const std::string& key, double value) { return kv_line(key, format_double(value)); }

std::string termination_name(const Trajectory& t) {
  return t.terminated_early == Termination::Overflow ? "overflow" : "none";
}

double max_value(const DifferenceSeries& s) {
  return s.values.empty() ? 0.0 : *std::max_element(s.values.begin(), s.values.end());
}

void finish(const ExperimentConfig& config, const CommandResult& result) {
  report::write_file(config.out_dir / "summary.txt", result.summary);
  report::write_file(config.out_dir / "config.txt", serialize_config(config));
}

IntegratorSpec first_spec(const ExperimentConfig& c) { return IntegratorSpec::parse(c.method, c.dt); }
IntegratorSpec second_spec(const ExperimentConfig& c) {
  return IntegratorSpec::parse(c.method2, c.dt2);
}

}  // namespace

std::pair<Trajectory, Trajectory> integrate_pair(const QuadraticOdeSystem& system,
                                                 const StateVector& u0, const IntegratorSpec& a,
                                                 const IntegratorSpec& b, double t_end,
                                                 double output_interval) {
  auto second = std::async(std::launch::async, [&] {
    return integrate(system, u0, b, t_end, output_interval);
  });
  Trajectory first = integrate(system, u0, a, t_end, output_interval);
  return {std::move(first), second.get()};
}

std::string list_models() {
  std::string out;
  for (const auto& name : model_names()) {
    const auto sys = build_model(name);
    out += name + "  n=" + std::to_string(sys.dimension()) + "  u0=(";
    for (std::size_t i = 0; i < sys.dimension(); ++i) {
      if (i) out += ", ";
      out += format_double(sys.default_initial_state()[i]);
    }
    out += ")  exact=" + std::string(sys.has_exact_solution() ? "yes" : "no") + "\n";
  }
  return out;
}

CommandResult cmd_run(const ExperimentConfig& c) {
  const auto sys = c.system();
  const auto traj = integrate(sys, c.initial_state, first_spec(c), c.t_end, c.output_interval);
  report::write_file(c.out_dir / "trajectory.csv", report::trajectory_csv(traj));

  CommandResult r;
  r.summary += kv_line("source", describe(traj));
  r.summary += kv_line("samples", std::to_string(traj.samples.size()));
  r.summary += kv_line("terminated_early", termination_name(traj));
  finish(c, r);
  return r;
}

CommandResult cmd_compare(const ExperimentConfig& c) {
  const auto sys = c.system();
  const auto [a, b] =
      integrate_pair(sys, c.initial_state, first_spec(c), second_spec(c), c.t_end, c.output_interval);
  const auto diff = pair_difference(a, b, c.norm);
  const auto onset = divergence_time(diff, c.threshold);
  report::write_file(c.out_dir / "trajectory_a.csv", report::trajectory_csv(a));
  report::write_file(c.out_dir / "trajectory_b.csv", report::trajectory_csv(b));
  report::write_file(c.out_dir / "difference.csv", report::difference_csv(diff));

  CommandResult r;
  r.summary += kv_line("source_a", diff.source_a);
  r.summary += kv_line("source_b", diff.source_b);
  r.summary += kv_line("norm", diff.norm.name());
  r.summary += kv_line("max_diff", max_value(diff));
  r.summary += kv_line("threshold", c.threshold);
  r.summary += kv_line("onset", onset ? format_double(*onset) : std::string("none"));
  r.summary += kv_line("truncated", diff.truncated ? "yes" : "no");
  finish(c, r);
  return r;
}

CommandResult cmd_refine(const ExperimentConfig& c) {
  const auto sys = c.system();
  RefinementOptions opt;
  opt.ratio = c.ratio;
  opt.epsilon = c.epsilon;
  opt.t_end = c.t_end;
  opt.output_interval = c.output_interval;
  opt.norm = c.norm;
  opt.max_levels = c.max_levels;
  const auto outcome = refine_until_converged(sys, c.initial_state, first_spec(c), opt);
  report::write_file(c.out_dir / "ladder.csv", report::ladder_csv(outcome));
  report::write_file(c.out_dir / "final_trajectory.csv",
                     report::trajectory_csv(outcome.final_trajectory));

  CommandResult r;
  r.exit_code = outcome.converged ? kExitOk : kExitNotConverged;
  r.summary += kv_line("converged", outcome.converged ? "yes" : "no");
  r.summary += kv_line("levels", std::to_string(outcome.ladder.size()));
  r.summary += kv_line("epsilon", outcome.epsilon);
  r.summary += kv_line("final_dt", outcome.final_dt);
  if (outcome.ladder.back().max_diff) {
    r.summary += kv_line("final_max_diff", *outcome.ladder.back().max_diff);
  }
  finish(c, r);
  return r;
}

CommandResult cmd_order(const ExperimentConfig& c) {
  const auto sys = c.system();
  const auto spec = first_spec(c);
  const auto est = observed_order(sys, c.initial_state, spec, c.dt_ladder, c.t_probe);
  report::write_file(c.out_dir / "order.csv", report::order_csv(est));

  CommandResult r;
  r.summary += kv_line("method", spec.method_name());
  r.summary += kv_line("expected_order", std::to_string(spec.expected_order()));
  r.summary += kv_line("observed_order", est.order);
  r.summary += kv_line("t_probe", c.t_probe);
  finish(c, r);
  return r;
}

CommandResult cmd_stability(const ExperimentConfig& c) {
  const auto sys = c.system();
  const auto spec = first_spec(c);
  const auto traj = integrate(sys, c.initial_state, spec, c.t_end, c.output_interval);
  const auto classes = classify_along(sys, traj);
  report::write_file(c.out_dir / "classification.csv", report::classification_csv(classes));

  CommandResult r;
  std::size_t unstable = 0, stable = 0, marginal = 0;
  for (const auto& row : classes) {
    switch (row.classification) {
      case LocalClass::LocallyUnstable:
        ++unstable;
        break;
      case LocalClass::LocallyStable:
        ++stable;
        break;
      case LocalClass::Marginal:
        ++marginal;
        break;
    }
  }
  r.summary += kv_line("source", describe(traj));
  r.summary += kv_line("samples", std::to_string(classes.size()));
  r.summary += kv_line("locally_stable", std::to_string(stable));
  r.summary += kv_line("locally_unstable", std::to_string(unstable));
  r.summary += kv_line("marginal", std::to_string(marginal));
  r.summary += kv_line("terminated_early", termination_name(traj));

  // Scalar linear models also get the per-step amplification factor.
  const bool scalar_linear = sys.dimension() == 1 && sys.quadratic_terms().empty() &&
                             sys.constant()[0] == 0.0;
  if (scalar_linear && spec.method() == Method::ExplicitEuler) {
    const auto amp = scalar_amplification(sys.linear()(0, 0), spec.dt());
    report::write_file(c.out_dir / "amplification.txt", report::amplification_text(amp));
    r.summary += kv_line("amplification_factor", amp.factor);
    r.summary += kv_line("regime", std::string(to_string(amp.regime)));
  }
  finish(c, r);
  return r;
}

Fig1Result compute_fig1(const ExperimentConfig& c) {
  const auto sys = c.system();
  const auto a = first_spec(c);
  const auto b = second_spec(c);
  const double common = common_output_interval(c.dt, c.dt2);

  auto run_a = integrate(sys, c.initial_state, a, c.t_end, c.dt);
  auto run_b = integrate(sys, c.initial_state, b, c.t_end, c.dt2);
  auto common_a = integrate(sys, c.initial_state, a, c.t_end, common);
  auto common_b = integrate(sys, c.initial_state, b, c.t_end, common);
  auto pair = pair_difference(common_a, common_b, c.norm);
  auto common_error_a = error_vs_exact(sys, common_a, c.norm);
  auto common_error_b = error_vs_exact(sys, common_b, c.norm);
  auto error_a = error_vs_exact(sys, run_a, c.norm);
  auto error_b = error_vs_exact(sys, run_b, c.norm);

  std::vector<Sample> exact;
  const TimeGrid grid = make_time_grid(c.output_interval, c.t_end, c.output_interval);
  for (std::int64_t k = 0; k <= grid.sample_count; ++k) {
    const double t = static_cast<double>(k) * c.output_interval;
    exact.push_back({t, exact_solution(sys, t, c.initial_state)});
  }
  return {std::move(run_a),          std::move(run_b),          std::move(common_a),
          std::move(common_b),       std::move(pair),           std::move(common_error_a),
          std::move(common_error_b), std::move(error_a),        std::move(error_b),
          std::move(exact)};
}

CommandResult cmd_fig1(const ExperimentConfig& c) {
  const Fig1Result f = compute_fig1(c);
  report::write_file(c.out_dir / "run_a.csv", report::trajectory_csv(f.run_a));
  report::write_file(c.out_dir / "run_b.csv", report::trajectory_csv(f.run_b));
  Trajectory exact_traj{c.model, c.initial_state, f.run_a.spec, c.output_interval, f.exact,
                        Termination::None};
  report::write_file(c.out_dir / "exact.csv", report::trajectory_csv(exact_traj));
  report::write_file(c.out_dir / "difference.csv", report::difference_csv(f.pair));
  report::write_file(c.out_dir / "error_a.csv", report::difference_csv(f.error_a));
  report::write_file(c.out_dir / "error_b.csv", report::difference_csv(f.error_b));

  std::string table = "t,run_a,run_b,exact,diff,error_a,error_b\n";
  const auto sys = c.system();
  for (std::size_t k = 0; k < f.pair.times.size(); ++k) {
    const double t = f.pair.times[k];
    table += format_double(t) + ',' + format_double(f.common_a.samples[k].state[0]) + ',' +
             format_double(f.common_b.samples[k].state[0]) + ',' +
             format_double(exact_solution(sys, t, c.initial_state)[0]) + ',' +
             format_double(f.pair.values[k]) + ',' + format_double(f.common_error_a.values[k]) +
             ',' + format_double(f.common_error_b.values[k]) + '\n';
  }
  report::write_file(c.out_dir / "comparison.csv", table);
  report::write_file(c.out_dir / "fig1.gp", report::fig1_plot_script());

  // The two runs agreeing more closely than either agrees with the exact
  // solution, at every common time after t = 0.
  bool gap_below_errors = true;
  for (std::size_t k = 1; k < f.pair.values.size(); ++k) {
    gap_below_errors = gap_below_errors && f.pair.values[k] < f.common_error_a.values[k] &&
                       f.pair.values[k] < f.common_error_b.values[k];
  }

  CommandResult r;
  r.summary += kv_line("run_a", describe(f.run_a));
  r.summary += kv_line("run_b", describe(f.run_b));
  r.summary += kv_line("common_interval", f.common_a.output_interval);
  r.summary += kv_line("max_pair_diff", max_value(f.pair));
  r.summary += kv_line("max_error_a", max_value(f.common_error_a));
  r.summary += kv_line("max_error_b", max_value(f.common_error_b));
  r.summary += kv_line("pair_diff_below_both_errors", gap_below_errors ? "yes" : "no");
  finish(c, r);
  return r;
}

Fig2Result compute_fig2(const ExperimentConfig& c) {
  const auto sys = c.system();
  auto [a, b] = integrate_pair(sys, c.initial_state, first_spec(c), second_spec(c), c.t_end,
                               c.output_interval);
  auto diff = pair_difference(a, b, c.norm);
  auto rep = analyze_divergence(diff, c.threshold, c.floor, c.ceiling);
  return {std::move(a), std::move(b), std::move(diff), rep};
}

CommandResult cmd_fig2(const ExperimentConfig& c) {
  if (c.scale == Fig2Scale::Paper) {
    std::cerr << "warning: paper scale integrates ~5.5e8 steps per 50 time units; expect minutes\n";
  }
  const Fig2Result f = compute_fig2(c);
  report::write_file(c.out_dir / "difference.csv", report::difference_csv(f.difference));
  report::write_file(c.out_dir / "divergence.txt", report::divergence_text(f.report));
  report::write_file(c.out_dir / "fig2.gp", report::fig2_plot_script(c.threshold));

  CommandResult r;
  r.summary += kv_line("source_a", f.difference.source_a);
  r.summary += kv_line("source_b", f.difference.source_b);
  r.summary += kv_line("scale", std::string(to_string(c.scale)));
  r.summary += kv_line("norm", f.difference.norm.name());
  r.summary += report::divergence_text(f.report);
  r.summary += kv_line("max_diff", max_value(f.difference));
  finish(c, r);
  return r;
}

CommandResult run_command(const ExperimentConfig& c) {
  if (c.command == "run") return cmd_run(c);
  if (c.command == "compare") return cmd_compare(c);
  if (c.command == "refine") return cmd_refine(c);
  if (c.command == "order") return cmd_order(c);
  if (c.command == "stability") return cmd_stability(c);
  if (c.command == "fig1") return cmd_fig1(c);
  if (c.command == "fig2") return cmd_fig2(c);
  throw UsageError("unknown command '" + c.command + "'");
}

}  // namespace odeverify
