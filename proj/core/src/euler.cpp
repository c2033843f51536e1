#include "nsdde/euler.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "nsdde/error.hpp"

namespace nsdde {

namespace {

using ConstVectorMap = Eigen::Map<const Vector>;

// One application of the scheme's update; shared by simulate and refine_to so
// both evaluate the same floating-point expression.
Vector scheme_value(const Vector& neutral_ahead, const Vector& x, const Vector& neutral_lag,
                    const Vector& drift, double dt, const Matrix& diffusion, const Vector& dB) {
    Vector out = neutral_ahead + (x - neutral_lag);
    out += drift * dt;
    out += diffusion * dB;
    return out;
}

struct Coefficients {
    Vector drift;
    Matrix diffusion;
    Vector neutral_lag;
};

Coefficients evaluate(const NsddeModel& model, const Vector& x, const Vector& y, double t) {
    Coefficients c{model.drift()(x, y, t), model.diffusion()(x, y, t), model.neutral()(y)};
    if (c.drift.size() != model.state_dim() || c.neutral_lag.size() != model.state_dim() ||
        c.diffusion.rows() != model.state_dim() || c.diffusion.cols() != model.noise_dim()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "coefficient output does not match model " + model.id() + " dimensions");
    }
    return c;
}

void check_inputs(const NsddeModel& model, const InitialSegment& xi, const DelayGrid& grid,
                  const BrownianPath& noise) {
    if (model.delay() != grid.tau()) {
        throw Error(ErrorKind::IncompatibleGrids, "model delay differs from grid tau");
    }
    if (xi.state_dim() != model.state_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "initial segment dimension differs from model");
    }
    if (noise.noise_dim() != model.noise_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "noise dimension differs from model");
    }
}

NoiseIdentity identity_of(const BrownianPath& noise) {
    return {noise.seed(), noise.path_index(), noise.origin_steps()};
}

}  // namespace

PathGrid::PathGrid(DelayGrid grid, Matrix values, NoiseIdentity noise)
    : grid_(grid), values_(std::move(values)), noise_(noise) {}

PathGrid PathGrid::from_values(const DelayGrid& grid, Matrix values) {
    if (values.cols() != grid.steps_per_delay() + grid.total_steps() + 1 || values.rows() < 1) {
        throw Error(ErrorKind::DimensionMismatch, "path needs N + M + 1 columns");
    }
    if (!values.allFinite()) {
        throw Error(ErrorKind::InvalidRange, "path values must be finite");
    }
    return PathGrid(grid, std::move(values), NoiseIdentity{0, 0, grid.total_steps()});
}

double PathGrid::segment_sup_norm() const {
    double sup = 0.0;
    for (std::int64_t l = -grid_.steps_per_delay(); l <= 0; ++l) sup = std::max(sup, at(l).norm());
    return sup;
}

double kappa_floor(double delta, double t) {
    if (!(delta > 0.0) || !(t >= 0.0)) {
        throw Error(ErrorKind::InvalidRange, "kappa_floor requires delta > 0 and t >= 0");
    }
    const double q = t / delta;
    const double nearest = std::round(q);
    const double whole = std::abs(q - nearest) <= 1e-9 * std::max(1.0, nearest) ? nearest : std::floor(q);
    return whole * delta;
}

PathGrid simulate(const NsddeModel& model, const InitialSegment& xi, const DelayGrid& grid,
                  const BrownianPath& noise) {
    check_inputs(model, xi, grid, noise);
    if (!(noise.grid() == grid)) {
        throw Error(ErrorKind::IncompatibleGrids, "noise was not generated on the simulation grid");
    }

    const std::int64_t n = grid.steps_per_delay();
    const std::int64_t m = grid.total_steps();
    const double dt = grid.step();

    Matrix values(model.state_dim(), n + m + 1);
    values.leftCols(n + 1) = sample_segment(xi, grid).values;
    auto col = [&](std::int64_t l) { return values.col(l + n); };

    for (std::int64_t l = 0; l < m; ++l) {
        const Vector x = col(l);
        const Vector y = col(l - n);
        const Coefficients c = evaluate(model, x, y, grid.time(l));
        const Vector ahead = model.neutral()(col(l + 1 - n));
        const ConstVectorMap dB(noise.increment(l).data(), model.noise_dim());
        const Vector next = scheme_value(ahead, x, c.neutral_lag, c.drift, dt, c.diffusion, dB);
        if (!next.allFinite()) throw NonFiniteStateError(l + 1);
        col(l + 1) = next;
    }
    return PathGrid(grid, std::move(values), identity_of(noise));
}

PathGrid refine_to(const PathGrid& path, const NsddeModel& model, const InitialSegment& xi,
                   const DelayGrid& fine_grid, const BrownianPath& fine_noise) {
    const std::int64_t ratio = fine_grid.ratio_from(path.grid());
    check_inputs(model, xi, fine_grid, fine_noise);
    if (!(fine_noise.grid() == fine_grid) || !(identity_of(fine_noise) == path.noise()) ||
        fine_noise.origin_steps() % fine_grid.total_steps() != 0) {
        throw Error(ErrorKind::IncompatibleNoise,
                    "fine noise is not the realization that drove the coarse path");
    }
    if (ratio == 1) return path;

    const DelayGrid& coarse = path.grid();
    const std::int64_t nc = coarse.steps_per_delay();
    const std::int64_t nf = fine_grid.steps_per_delay();
    const std::int64_t mf = fine_grid.total_steps();
    const double coarse_dt = coarse.step();
    const int noise_dim = model.noise_dim();

    Matrix values(model.state_dim(), nf + mf + 1);
    values.leftCols(nf + 1) = sample_segment(xi, fine_grid).values;
    auto col = [&](std::int64_t l) { return values.col(l + nf); };

    for (std::int64_t l = 0; l < coarse.total_steps(); ++l) {
        const Vector x = path.at(l);
        const Vector y = path.at(l - nc);
        const Coefficients c = evaluate(model, x, y, coarse.time(l));
        Vector partial = Vector::Zero(noise_dim);
        const std::int64_t base = l * ratio;
        for (std::int64_t j = 1; j <= ratio; ++j) {
            partial += ConstVectorMap(fine_noise.increment(base + j - 1).data(), noise_dim);
            const std::int64_t i = base + j;
            const Vector ahead = model.neutral()(col(i - nf));
            const double dt = coarse_dt * (static_cast<double>(j) / static_cast<double>(ratio));
            const Vector next = scheme_value(ahead, x, c.neutral_lag, c.drift, dt, c.diffusion, partial);
            if (!next.allFinite()) throw NonFiniteStateError(i);
            col(i) = next;
        }
    }
    return PathGrid(fine_grid, std::move(values), path.noise());
}

PerturbationSeries perturbation(const PathGrid& coarse_on_fine, double coarse_step) {
    const DelayGrid& grid = coarse_on_fine.grid();
    const double fine_step = grid.step();
    const double q = coarse_step / fine_step;
    const auto ratio = static_cast<std::int64_t>(std::llround(q));
    if (!(coarse_step > 0.0) || ratio < 1 || std::abs(q - static_cast<double>(ratio)) > 1e-9 * q ||
        grid.steps_per_delay() % ratio != 0 || grid.total_steps() % ratio != 0) {
        throw Error(ErrorKind::IncompatibleGrids, "coarse step must be an integer multiple of the "
                                                  "fine step dividing tau and T");
    }
    PerturbationSeries out{grid, ratio, Matrix::Zero(coarse_on_fine.state_dim(),
                                                     coarse_on_fine.values().cols())};
    const std::int64_t n = grid.steps_per_delay();
    for (std::int64_t j = 1; j <= grid.total_steps(); ++j) {
        out.values.col(j + n) = coarse_on_fine.at(kappa_index(j, ratio)) - coarse_on_fine.at(j);
    }
    return out;
}

std::optional<std::int64_t> truncation_index(const PathGrid& path, double radius) {
    if (!(radius > 0.0)) {
        throw Error(ErrorKind::InvalidRange, "truncation radius must be positive");
    }
    const double threshold = radius / 3.0;
    for (std::int64_t l = 0; l <= path.grid().total_steps(); ++l) {
        if (path.at(l).norm() > threshold) return l;
    }
    return std::nullopt;
}

std::optional<double> truncation_time(const PathGrid& path, double radius) {
    const auto l = truncation_index(path, radius);
    if (!l) return std::nullopt;
    return path.time(*l);
}

}  // namespace nsdde
