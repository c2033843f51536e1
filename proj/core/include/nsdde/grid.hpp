#pragma once

#include <cstdint>

namespace nsdde {

/// Uniform time grid on [-tau, T] whose step divides both the delay and the
/// horizon: step = tau / N = T / M.
///
/// Grid times are always derived from the integer index, never accumulated,
/// so the delayed time t_l - tau is exactly index l - N.
class DelayGrid {
public:
    DelayGrid() = default;
    DelayGrid(double tau, double horizon, std::int64_t steps_per_delay, std::int64_t total_steps);

    double tau() const noexcept { return tau_; }
    double horizon() const noexcept { return horizon_; }
    std::int64_t steps_per_delay() const noexcept { return n_; }
    std::int64_t total_steps() const noexcept { return m_; }

    /// tau / N.
    double step() const noexcept { return tau_ / static_cast<double>(n_); }

    /// t_l for l in [-N, M]. t_N == tau, t_{-N} == -tau and t_M == horizon
    /// hold bit-exactly.
    double time(std::int64_t l) const noexcept;

    /// Grid with step multiplied by factor. Throws IncompatibleFactor unless
    /// factor divides both N and M.
    DelayGrid coarsened(std::int64_t factor) const;

    /// Integer r with coarse.step() == r * step(), sharing tau and horizon.
    /// Throws IncompatibleGrids otherwise.
    std::int64_t ratio_from(const DelayGrid& coarse) const;

    friend bool operator==(const DelayGrid&, const DelayGrid&) = default;

private:
    double tau_ = 1.0;
    double horizon_ = 2.0;
    std::int64_t n_ = 1;
    std::int64_t m_ = 2;
};

/// Builds the grid for a requested step. The step is advisory: the returned
/// grid uses tau / round(tau / delta).
///
/// Throws InvalidRange unless tau > 0, horizon > tau and 0 < delta < 1, and
/// NonDivisibleStep when delta does not divide tau and horizon to a relative
/// tolerance of 1e-12.
DelayGrid make_grid(double tau, double horizon, double delta);

}  // namespace nsdde
