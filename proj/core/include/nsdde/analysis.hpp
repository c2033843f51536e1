#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nsdde/euler.hpp"
#include "nsdde/grid.hpp"
#include "nsdde/model.hpp"
#include "nsdde/types.hpp"

namespace nsdde {

/// Validated step ladder: grids[0] is the coarsest, grids.back() the finest,
/// and ratios[i] the number of finest steps per step of grids[i].
struct Ladder {
    std::vector<double> steps;
    std::vector<DelayGrid> grids;
    std::vector<std::int64_t> ratios;

    const DelayGrid& finest() const { return grids.back(); }
};

/// Throws InvalidRange for an empty or non-decreasing ladder and
/// NonDivisibleStep when a step does not divide tau, the horizon, or its
/// predecessor.
Ladder make_ladder(double tau, double horizon, const std::vector<double>& steps);

/// Sup-difference statistics for one pair of consecutive ladder levels.
struct LevelPairRow {
    double delta_coarse = 0.0;
    double delta_fine = 0.0;
    std::uint64_t exceed_count = 0;
    std::uint64_t diverged_count = 0;
    double p_hat = 0.0;
    double mean_sup_diff = 0.0;
    double max_sup_diff = 0.0;
    /// More than 1% of the paths diverged; the row should not be trusted.
    bool flagged = false;
    /// Per-path max over finest-grid times of |X^{coarse} - X^{fine}|, in
    /// path order; NaN for diverged paths.
    std::vector<double> sup_diffs;

    /// Paths that contributed (n_paths - diverged_count).
    std::uint64_t evaluated() const { return sup_diffs.size() - diverged_count; }
    /// Exceedance fraction recomputed from sup_diffs for another threshold.
    double p_hat_at(double epsilon) const;
};

struct ConvergenceTable {
    std::vector<double> ladder;
    double epsilon = 0.0;
    std::uint64_t n_paths = 0;
    std::uint64_t seed = 0;
    std::vector<LevelPairRow> rows;
};

/// Coupled Cauchy study. For every path the finest-level noise is generated
/// once, coarsened to each ladder level, each level is simulated and refined
/// onto the finest grid, and consecutive levels are compared.
/// Paths whose scheme hits a non-finite state are counted in diverged_count.
/// `threads` is advisory; results do not depend on it.
ConvergenceTable converge_study(const NsddeModel& model, const InitialSegment& xi, double tau,
                                double horizon, const std::vector<double>& ladder, double epsilon,
                                std::uint64_t n_paths, std::uint64_t seed, unsigned threads = 1);

/// Integrals of one refined path up to T ^ tau(R), over the finest grid.
struct PerturbationIntegrals {
    double abs_integral = 0.0;  ///< int |p(s)| ds
    double lambda = 0.0;        ///< int |p(s)| KR(s) ds
    bool truncated = false;     ///< |X| exceeded R/3 before T
};

/// Trapezoid rule on each fine interval [t_j, t_{j+1}] using the left limit
/// X(kappa(t_j)) - X(t_{j+1}) at the right end, which integrates the
/// piecewise-linear sawtooth of a deterministic scheme exactly.
PerturbationIntegrals integrate_perturbation(const PathGrid& coarse_on_fine, std::int64_t ratio,
                                             double radius, const RateFn& kr);

struct PerturbationRow {
    double delta = 0.0;
    std::uint64_t n_paths = 0;
    std::uint64_t diverged_count = 0;
    std::uint64_t truncated_count = 0;
    double mean_abs_integral = 0.0;
    double se_abs_integral = 0.0;
    double mean_lambda = 0.0;
    double se_lambda = 0.0;
};

struct PerturbationTable {
    double radius = 0.0;
    std::vector<PerturbationRow> rows;
};

/// Monte Carlo estimates of E int_0^{T ^ tau(R)} |p(s)| ds and of
/// E lambda^R(T ^ tau(R)) per ladder level, all levels coupled through the
/// finest noise.
PerturbationTable perturbation_integrability(const NsddeModel& model, const InitialSegment& xi,
                                             double tau, double horizon,
                                             const std::vector<double>& ladder,
                                             std::uint64_t n_paths, std::uint64_t seed,
                                             double radius, const RateFn& kr,
                                             unsigned threads = 1);

struct MomentReport {
    double delta = 0.0;
    /// max over grid times t in [0, T] of the sample mean of |X(t)|^2.
    double sup_mean_square = 0.0;
    double argmax_time = 0.0;
    /// Standard error of the sample mean at argmax_time.
    double std_error = 0.0;
    /// Sample mean of max_t |X(t)|^2.
    double mean_sup_square = 0.0;
    double mean_sup_std_error = 0.0;
    std::uint64_t n_paths = 0;
    std::uint64_t diverged_count = 0;
};

/// Second-moment report from n_paths independent paths (n_paths >= 2).
/// Diverged paths are excluded and counted; throws DegenerateSampling when
/// fewer than two paths remain.
MomentReport estimate_moments(const NsddeModel& model, const InitialSegment& xi, double tau,
                              double horizon, double delta, std::uint64_t n_paths,
                              std::uint64_t seed, unsigned threads = 1);

struct SupBoundResult {
    bool holds = true;
    /// First prefix index L at which the inequality failed.
    std::optional<std::int64_t> first_violation;
    /// Both sides at the first violation, or at L = M when none occurred.
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Checks, for every prefix L of the path,
///   max_{l<=L} |X_l|^p <= kappa/(1-kappa) |xi|^p + (1-kappa)^{-p} max_{l<=L} |X_l - D(X_{l-N})|^p
/// with |xi| the sup norm of the sampled initial segment.
SupBoundResult sup_bound_assert(const PathGrid& path, const NeutralFn& neutral, double kappa,
                             double p);

/// |a + b|^p <= (1 + eps^{1/(p-1)})^{p-1} (|a|^p + |b|^p / eps), to a
/// relative tolerance of 1e-12.
bool power_split_holds(double a, double b, double p, double eps);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval for k successes out of n at 95% confidence.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials);

/// True when, for every pair of consecutive rows, the later row's p_hat does
/// not exceed the upper end of the earlier row's Wilson interval.
bool exceedance_non_increasing(const ConvergenceTable& table);

}  // namespace nsdde
