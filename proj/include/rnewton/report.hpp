#pragma once

#include "rnewton/analysis.hpp"
#include "rnewton/problems.hpp"

#include <filesystem>

namespace rnewton {

/// Locale-independent shortest-faithful formatting with 17 significant
/// digits; NaN renders as "nan".
std::string fmt17(double x);

/// Writes `k,residual_norm,step_norm,dist_to_solution,ratio_q,quad_quotient,
/// inverse_norm_estimate` rows. The file is written to a temporary name and
/// renamed on success so failures leave no partial output.
void write_trace_csv(const std::filesystem::path& path,
                     const ConvergenceTrace& trace);

void write_report_json(const std::filesystem::path& path,
                       const std::string& problem_name,
                       const ConvergenceTrace& trace, const RateReport& rate);

void write_spread_json(const std::filesystem::path& path,
                       const std::string& manifold_name,
                       const SpreadEstimate& estimate);

void write_spread_csv(const std::filesystem::path& path,
                      const std::string& manifold_name,
                      const SpreadEstimate& estimate);

}  // namespace rnewton
