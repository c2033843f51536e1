#include "nsdde/grid.hpp"

#include <cmath>
#include <sstream>

#include "nsdde/error.hpp"

namespace nsdde {

namespace {

constexpr double kDivisibilityTolerance = 1e-12;

std::int64_t divide_exactly(double span, double delta, const char* what) {
    const double ratio = span / delta;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(rounded * delta - span) > kDivisibilityTolerance * span) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "step " << delta << " does not divide " << what << " " << span;
        throw Error(ErrorKind::NonDivisibleStep, msg.str());
    }
    return static_cast<std::int64_t>(rounded);
}

}  // namespace

DelayGrid::DelayGrid(double tau, double horizon, std::int64_t steps_per_delay,
                     std::int64_t total_steps)
    : tau_(tau), horizon_(horizon), n_(steps_per_delay), m_(total_steps) {
    if (!(tau > 0.0) || !(horizon > tau) || n_ < 1 || m_ <= n_) {
        throw Error(ErrorKind::InvalidRange, "grid requires tau > 0, horizon > tau, 1 <= N < M");
    }
    const double implied = static_cast<double>(m_) * tau_ / static_cast<double>(n_);
    if (std::abs(implied - horizon_) > kDivisibilityTolerance * horizon_) {
        throw Error(ErrorKind::NonDivisibleStep, "M * tau / N must equal the horizon");
    }
    if (!(step() < 1.0)) {
        throw Error(ErrorKind::InvalidRange, "grid step must lie in (0, 1)");
    }
}

double DelayGrid::time(std::int64_t l) const noexcept {
    if (l == m_) return horizon_;
    if (l < 0) return -time(-l);
    const std::int64_t whole = l / n_;
    const std::int64_t rest = l % n_;
    return static_cast<double>(whole) * tau_ +
           static_cast<double>(rest) * tau_ / static_cast<double>(n_);
}

DelayGrid DelayGrid::coarsened(std::int64_t factor) const {
    if (factor < 1 || n_ % factor != 0 || m_ % factor != 0) {
        throw Error(ErrorKind::IncompatibleFactor,
                    "factor " + std::to_string(factor) + " must divide N=" + std::to_string(n_) +
                        " and M=" + std::to_string(m_));
    }
    return DelayGrid(tau_, horizon_, n_ / factor, m_ / factor);
}

std::int64_t DelayGrid::ratio_from(const DelayGrid& coarse) const {
    if (coarse.tau_ != tau_ || coarse.horizon_ != horizon_ || coarse.n_ < 1 ||
        n_ % coarse.n_ != 0 || m_ % coarse.m_ != 0 || n_ / coarse.n_ != m_ / coarse.m_) {
        throw Error(ErrorKind::IncompatibleGrids, "coarse grid is not an integer coarsening");
    }
    return n_ / coarse.n_;
}

DelayGrid make_grid(double tau, double horizon, double delta) {
    if (!(tau > 0.0) || !(horizon > tau) || !(delta > 0.0) || !(delta < 1.0)) {
        throw Error(ErrorKind::InvalidRange, "make_grid requires tau > 0, horizon > tau, 0 < delta < 1");
    }
    const std::int64_t n = divide_exactly(tau, delta, "tau");
    const std::int64_t m = divide_exactly(horizon, delta, "horizon");
    return DelayGrid(tau, horizon, n, m);
}

}  // namespace nsdde
