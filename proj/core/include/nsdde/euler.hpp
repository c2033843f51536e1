#pragma once

#include <cstdint>
#include <optional>

#include "nsdde/brownian.hpp"
#include "nsdde/grid.hpp"
#include "nsdde/model.hpp"
#include "nsdde/types.hpp"

namespace nsdde {

/// Identity of the Brownian realization that drove a simulated path.
struct NoiseIdentity {
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
    std::int64_t origin_steps = 0;

    friend bool operator==(const NoiseIdentity&, const NoiseIdentity&) = default;
};

/// State values X(t_l) for l = -N..M; entries l <= 0 are the sampled
/// initial segment. All entries are finite.
class PathGrid {
public:
    /// Wraps precomputed values; column j holds X(t_{j - N}).
    static PathGrid from_values(const DelayGrid& grid, Matrix values);

    const DelayGrid& grid() const noexcept { return grid_; }
    int state_dim() const noexcept { return static_cast<int>(values_.rows()); }
    const Matrix& values() const noexcept { return values_; }
    const NoiseIdentity& noise() const noexcept { return noise_; }

    /// X(t_l), l in [-N, M].
    auto at(std::int64_t l) const { return values_.col(l + grid_.steps_per_delay()); }
    double time(std::int64_t l) const noexcept { return grid_.time(l); }

    /// max over l in [-N, 0] of |X(t_l)|.
    double segment_sup_norm() const;

    friend PathGrid simulate(const NsddeModel&, const InitialSegment&, const DelayGrid&,
                             const BrownianPath&);
    friend PathGrid refine_to(const PathGrid&, const NsddeModel&, const InitialSegment&,
                              const DelayGrid&, const BrownianPath&);

private:
    PathGrid(DelayGrid grid, Matrix values, NoiseIdentity noise);

    DelayGrid grid_;
    Matrix values_;
    NoiseIdentity noise_;
};

/// p(t_j) = X(kappa(coarse step, t_j)) - X(t_j) on the fine grid; zero on
/// [-tau, 0] and at every coarse grid point.
struct PerturbationSeries {
    DelayGrid grid;
    /// Fine steps per coarse step.
    std::int64_t ratio = 1;
    /// Column j holds p(t_{j - N}).
    Matrix values;

    auto at(std::int64_t l) const { return values.col(l + grid.steps_per_delay()); }
};

/// floor(t / delta) * delta. Quotients within 1e-9 (relative) of an integer
/// snap to it, so grid times are fixed points despite binary rounding.
double kappa_floor(double delta, double t);

/// Index form of kappa_floor on a fine grid with `ratio` fine steps per
/// coarse step.
constexpr std::int64_t kappa_index(std::int64_t fine_index, std::int64_t ratio) {
    return (fine_index / ratio) * ratio;
}

/// Explicit neutral Euler scheme
///   X_{l+1} = D(X_{l+1-N}) + X_l - D(X_{l-N}) + b(X_l, X_{l-N}, t_l) step + sigma(X_l, X_{l-N}, t_l) dB_l.
///
/// Throws IncompatibleGrids when noise or delay do not match the grid,
/// DimensionMismatch on inconsistent dimensions and NonFiniteStateError
/// with the first non-finite step.
PathGrid simulate(const NsddeModel& model, const InitialSegment& xi, const DelayGrid& grid,
                  const BrownianPath& noise);

/// Continuous-time interpolation of the coarse scheme `path`, evaluated at
/// the times of `fine_grid`:
///   X(t) = D(X(t - tau)) + X(t_l) - D(X(t_l - tau)) + b(...)(t - t_l) + sigma(...)(B(t) - B(t_l))
/// for t in [t_l, t_{l+1}], computed forward so X(t - tau) is already known.
///
/// `fine_noise` must be the realization `path` was driven by, before
/// coarsening. The result equals `path` bit-for-bit at coarse grid points.
PathGrid refine_to(const PathGrid& path, const NsddeModel& model, const InitialSegment& xi,
                   const DelayGrid& fine_grid, const BrownianPath& fine_noise);

/// Perturbation process of a refine_to output for a scheme with step
/// coarse_step. Throws IncompatibleGrids unless coarse_step is an integer
/// multiple of the fine step dividing N and M.
PerturbationSeries perturbation(const PathGrid& coarse_on_fine, double coarse_step);

/// First l >= 0 with |X(t_l)| > R / 3, if any.
std::optional<std::int64_t> truncation_index(const PathGrid& path, double radius);

/// Time form of truncation_index. Throws InvalidRange unless radius > 0.
std::optional<double> truncation_time(const PathGrid& path, double radius);

}  // namespace nsdde
