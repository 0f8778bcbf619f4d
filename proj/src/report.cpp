#include "odeverify/report.hpp"

#include <fstream>
#include <stdexcept>

#include "odeverify/format.hpp"

namespace odeverify::report {

std::string trajectory_csv(const Trajectory& t) {
  std::string out = "t";
  for (std::size_t i = 0; i < t.initial_state.size(); ++i) out += ",x" + std::to_string(i + 1);
  out += '\n';
  for (const auto& s : t.samples) {
    out += format_double(s.t);
    for (double x : s.state) {
      out += ',';
      out += format_double(x);
    }
    out += '\n';
  }
  return out;
}

std::string difference_csv(const DifferenceSeries& s) {
  std::string out = "t,diff\n";
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    out += format_double(s.times[k]) + ',' + format_double(s.values[k]) + '\n';
  }
  return out;
}

std::string classification_csv(const std::vector<LocalClassification>& c) {
  std::string out = "t,max_real_part,class\n";
  for (const auto& row : c) {
    out += format_double(row.t) + ',' + format_double(row.max_real_part) + ',' +
           std::string(to_string(row.classification)) + '\n';
  }
  return out;
}

std::string ladder_csv(const RefinementOutcome& r) {
  std::string out = "level,dt,max_diff\n";
  for (const auto& l : r.ladder) {
    out += std::to_string(l.level) + ',' + format_double(l.dt) + ',';
    if (l.max_diff) out += format_double(*l.max_diff);
    out += '\n';
  }
  return out;
}

std::string order_csv(const OrderEstimate& e) {
  std::string out = "dt,error,used\n";
  for (const auto& p : e.points) {
    out += format_double(p.dt) + ',' + format_double(p.error) + ',' + (p.used ? "1" : "0") + '\n';
  }
  return out;
}

std::string divergence_text(const DivergenceReport& r) {
  std::string out;
  out += "threshold = " + format_double(r.threshold) + '\n';
  out += "onset = " + (r.onset ? format_double(*r.onset) : std::string("none")) + '\n';
  out += "pre_onset_max = " + format_double(r.pre_onset_max) + '\n';
  out += "fit_floor = " + format_double(r.floor) + '\n';
  out += "fit_ceiling = " + format_double(r.ceiling) + '\n';
  if (r.growth) {
    out += "growth_rate = " + format_double(r.growth->rate) + '\n';
    out += "fit_t_lo = " + format_double(r.growth->t_lo) + '\n';
    out += "fit_t_hi = " + format_double(r.growth->t_hi) + '\n';
    out += "fit_residual = " + format_double(r.growth->residual) + '\n';
    out += "fit_samples = " + std::to_string(r.growth->samples) + '\n';
  } else {
    out += "growth_rate = none\n";
  }
  return out;
}

std::string amplification_text(const AmplificationReport& r) {
  return "lambda = " + format_double(r.lambda) + "\ndt = " + format_double(r.dt) +
         "\nfactor = " + format_double(r.factor) + "\nregime = " + std::string(to_string(r.regime)) +
         '\n';
}

std::string fig1_plot_script() {
  return R"(# gnuplot fig1.gp
set datafile separator ','
set key top right
set xlabel 't'
set ylabel 'u'
set title 'Explicit Euler on du/dt = -10u against the exact solution'
plot 'exact.csv' using 1:2 with lines lw 2 title 'exact exp(-10t)', \
     'run_a.csv' using 1:2 with linespoints pt 7 title 'run A', \
     'run_a.csv' using 1:2:(sprintf('%g', $1)) with labels offset 2,0 notitle, \
     'run_b.csv' using 1:2 with linespoints pt 5 title 'run B', \
     'run_b.csv' using 1:2:(sprintf('%g', $1)) with labels offset 2,0 notitle
pause -1
)";
}

std::string fig2_plot_script(double threshold) {
  return R"(# gnuplot fig2.gp
set datafile separator ','
set logscale y
set format y '10^{%L}'
set xlabel 't'
set ylabel '|X_a - X_b|'
set title 'Difference between two step sizes'
plot 'difference.csv' using 1:($2 > 0 ? $2 : 1/0) with lines title 'difference', \
     )" + format_double(threshold) +
         R"( with lines dt 2 title 'onset threshold'
pause -1
)";
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << contents;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace odeverify::report
