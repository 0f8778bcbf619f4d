#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "odeverify/convergence.hpp"
#include "odeverify/integrators.hpp"
#include "odeverify/stability.hpp"

// CSV and text renderers for every artifact the CLI writes. All numbers use
// shortest round-trip formatting; every CSV starts with a header row.
namespace odeverify::report {

/// t,x1,...,xn
[[nodiscard]] std::string trajectory_csv(const Trajectory& t);
/// t,diff
[[nodiscard]] std::string difference_csv(const DifferenceSeries& s);
/// t,max_real_part,class
[[nodiscard]] std::string classification_csv(const std::vector<LocalClassification>& c);
/// level,dt,max_diff (max_diff empty on level 1, "inf" after an overflow)
[[nodiscard]] std::string ladder_csv(const RefinementOutcome& r);
/// dt,error,used
[[nodiscard]] std::string order_csv(const OrderEstimate& e);

/// key = value block.
[[nodiscard]] std::string divergence_text(const DivergenceReport& r);
[[nodiscard]] std::string amplification_text(const AmplificationReport& r);

/// gnuplot scripts that read the CSVs sitting next to them.
[[nodiscard]] std::string fig1_plot_script();
[[nodiscard]] std::string fig2_plot_script(double threshold);

/// Writes `contents` to `path`, creating parent directories. Throws
/// std::runtime_error on I/O failure.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace odeverify::report
