#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nsdde/analysis.hpp"
#include "nsdde/euler.hpp"

namespace nsdde {

/// 17 significant digits (%.17g), locale independent.
std::string format_double(double value);

/// Header `t,x_1,...,x_n`, one row per grid index l = -N..M. LF line endings.
void write_path_csv(std::ostream& out, const PathGrid& path);

/// Columns level_pair, delta_coarse, delta_fine, epsilon, n_paths,
/// exceed_count, p_hat, mean_sup_diff, max_sup_diff, diverged_count.
void write_convergence_csv(std::ostream& out, const ConvergenceTable& table);

/// One row per report.
void write_moments_csv(std::ostream& out, const std::vector<MomentReport>& reports);

void write_perturbation_csv(std::ostream& out, const PerturbationTable& table);

}  // namespace nsdde
