#include "nsdde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nsdde/brownian.hpp"
#include "nsdde/error.hpp"
#include "parallel.hpp"

namespace nsdde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kZ95 = 1.959963984540054;

struct MeanAndError {
    double mean = 0.0;
    double std_error = 0.0;
};

// Values are consumed in path order so the result is schedule-independent.
MeanAndError mean_and_error(const std::vector<double>& values) {
    MeanAndError out;
    if (values.empty()) return out;
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / n;
    if (values.size() < 2) return out;
    double sq = 0.0;
    for (double v : values) sq += (v - out.mean) * (v - out.mean);
    out.std_error = std::sqrt(sq / (n - 1.0) / n);
    return out;
}

void require_paths(std::uint64_t n_paths, std::uint64_t minimum) {
    if (n_paths < minimum) {
        throw Error(ErrorKind::InvalidRange,
                    "at least " + std::to_string(minimum) + " paths are required");
    }
}

BrownianPath level_noise(const BrownianPath& finest, std::int64_t ratio) {
    return ratio == 1 ? finest : coarsen(finest, ratio);
}

// Simulates every ladder level on the finest noise and refines onto the
// finest grid; levels that diverge are left empty.
std::vector<std::optional<PathGrid>> coupled_levels(const NsddeModel& model,
                                                    const InitialSegment& xi, const Ladder& ladder,
                                                    const BrownianPath& finest_noise) {
    std::vector<std::optional<PathGrid>> out(ladder.grids.size());
    for (std::size_t i = 0; i < ladder.grids.size(); ++i) {
        try {
            const BrownianPath noise = level_noise(finest_noise, ladder.ratios[i]);
            const PathGrid coarse = simulate(model, xi, ladder.grids[i], noise);
            out[i] = refine_to(coarse, model, xi, ladder.finest(), finest_noise);
        } catch (const NonFiniteStateError&) {
            out[i].reset();
        }
    }
    return out;
}

}  // namespace

Ladder make_ladder(double tau, double horizon, const std::vector<double>& steps) {
    if (steps.empty()) throw Error(ErrorKind::InvalidRange, "ladder must not be empty");
    Ladder ladder;
    ladder.steps = steps;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        ladder.grids.push_back(make_grid(tau, horizon, steps[i]));
        if (i == 0) continue;
        if (!(steps[i] < steps[i - 1])) {
            throw Error(ErrorKind::InvalidRange, "ladder steps must be strictly decreasing");
        }
        const double q = steps[i - 1] / steps[i];
        if (std::abs(q - std::round(q)) > 1e-9 * q) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "ladder step " << steps[i] << " does not divide its predecessor " << steps[i - 1];
            throw Error(ErrorKind::NonDivisibleStep, msg.str());
        }
    }
    for (const DelayGrid& grid : ladder.grids) ladder.ratios.push_back(ladder.finest().ratio_from(grid));
    return ladder;
}

double LevelPairRow::p_hat_at(double epsilon) const {
    std::uint64_t exceed = 0;
    std::uint64_t used = 0;
    for (double d : sup_diffs) {
        if (std::isnan(d)) continue;
        ++used;
        if (d > epsilon) ++exceed;
    }
    return used == 0 ? 0.0 : static_cast<double>(exceed) / static_cast<double>(used);
}

ConvergenceTable converge_study(const NsddeModel& model, const InitialSegment& xi, double tau,
                                double horizon, const std::vector<double>& ladder_steps,
                                double epsilon, std::uint64_t n_paths, std::uint64_t seed,
                                unsigned threads) {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidRange, "epsilon must be positive");
    require_paths(n_paths, 1);
    const Ladder ladder = make_ladder(tau, horizon, ladder_steps);
    if (ladder.grids.size() < 2) {
        throw Error(ErrorKind::InvalidRange, "a convergence study needs at least two ladder steps");
    }
    const std::size_t pairs = ladder.grids.size() - 1;
    const DelayGrid& finest = ladder.finest();

    std::vector<std::vector<double>> diffs(n_paths);
    detail::parallel_for(n_paths, threads, [&](std::uint64_t p) {
        const BrownianPath noise = generate(finest, model.noise_dim(), seed, p);
        const auto levels = coupled_levels(model, xi, ladder, noise);
        std::vector<double>& out = diffs[p];
        out.assign(pairs, kNaN);
        for (std::size_t i = 0; i < pairs; ++i) {
            if (!levels[i] || !levels[i + 1]) continue;
            double sup = 0.0;
            for (std::int64_t l = 0; l <= finest.total_steps(); ++l) {
                sup = std::max(sup, (levels[i]->at(l) - levels[i + 1]->at(l)).norm());
            }
            out[i] = sup;
        }
    });

    ConvergenceTable table;
    table.ladder = ladder.steps;
    table.epsilon = epsilon;
    table.n_paths = n_paths;
    table.seed = seed;
    for (std::size_t i = 0; i < pairs; ++i) {
        LevelPairRow row;
        row.delta_coarse = ladder.grids[i].step();
        row.delta_fine = ladder.grids[i + 1].step();
        row.sup_diffs.reserve(n_paths);
        double sum = 0.0;
        for (std::uint64_t p = 0; p < n_paths; ++p) {
            const double d = diffs[p][i];
            row.sup_diffs.push_back(d);
            if (std::isnan(d)) {
                ++row.diverged_count;
                continue;
            }
            sum += d;
            row.max_sup_diff = std::max(row.max_sup_diff, d);
            if (d > epsilon) ++row.exceed_count;
        }
        const std::uint64_t used = row.evaluated();
        if (used > 0) {
            row.mean_sup_diff = sum / static_cast<double>(used);
            row.p_hat = static_cast<double>(row.exceed_count) / static_cast<double>(used);
        }
        row.flagged = static_cast<double>(row.diverged_count) > 0.01 * static_cast<double>(n_paths);
        table.rows.push_back(std::move(row));
    }
    return table;
}

PerturbationIntegrals integrate_perturbation(const PathGrid& coarse_on_fine, std::int64_t ratio,
                                             double radius, const RateFn& kr) {
    const DelayGrid& grid = coarse_on_fine.grid();
    if (ratio < 1 || grid.steps_per_delay() % ratio != 0 || grid.total_steps() % ratio != 0) {
        throw Error(ErrorKind::IncompatibleGrids, "ratio must divide the fine grid's N and M");
    }
    const auto stop_at = truncation_index(coarse_on_fine, radius);
    const std::int64_t stop = stop_at.value_or(grid.total_steps());

    PerturbationIntegrals out;
    out.truncated = stop < grid.total_steps();
    const double h = grid.step();
    for (std::int64_t j = 0; j < stop; ++j) {
        const auto frozen = coarse_on_fine.at(kappa_index(j, ratio));
        const double left = (frozen - coarse_on_fine.at(j)).norm();
        const double right = (frozen - coarse_on_fine.at(j + 1)).norm();
        out.abs_integral += 0.5 * h * (left + right);
        if (kr) out.lambda += 0.5 * h * (left * kr(grid.time(j)) + right * kr(grid.time(j + 1)));
    }
    return out;
}

PerturbationTable perturbation_integrability(const NsddeModel& model, const InitialSegment& xi,
                                             double tau, double horizon,
                                             const std::vector<double>& ladder_steps,
                                             std::uint64_t n_paths, std::uint64_t seed,
                                             double radius, const RateFn& kr, unsigned threads) {
    require_paths(n_paths, 1);
    if (!(radius > 0.0)) throw Error(ErrorKind::InvalidRange, "truncation radius must be positive");
    const Ladder ladder = make_ladder(tau, horizon, ladder_steps);
    const std::size_t levels = ladder.grids.size();

    std::vector<std::vector<std::optional<PerturbationIntegrals>>> per_path(n_paths);
    detail::parallel_for(n_paths, threads, [&](std::uint64_t p) {
        const BrownianPath noise = generate(ladder.finest(), model.noise_dim(), seed, p);
        const auto refined = coupled_levels(model, xi, ladder, noise);
        auto& out = per_path[p];
        out.resize(levels);
        for (std::size_t i = 0; i < levels; ++i) {
            if (refined[i]) out[i] = integrate_perturbation(*refined[i], ladder.ratios[i], radius, kr);
        }
    });

    PerturbationTable table;
    table.radius = radius;
    for (std::size_t i = 0; i < levels; ++i) {
        PerturbationRow row;
        row.delta = ladder.grids[i].step();
        row.n_paths = n_paths;
        std::vector<double> abs_values;
        std::vector<double> lambda_values;
        for (std::uint64_t p = 0; p < n_paths; ++p) {
            const auto& v = per_path[p][i];
            if (!v) {
                ++row.diverged_count;
                continue;
            }
            if (v->truncated) ++row.truncated_count;
            abs_values.push_back(v->abs_integral);
            lambda_values.push_back(v->lambda);
        }
        const MeanAndError a = mean_and_error(abs_values);
        const MeanAndError l = mean_and_error(lambda_values);
        row.mean_abs_integral = a.mean;
        row.se_abs_integral = a.std_error;
        row.mean_lambda = l.mean;
        row.se_lambda = l.std_error;
        table.rows.push_back(row);
    }
    return table;
}

MomentReport estimate_moments(const NsddeModel& model, const InitialSegment& xi, double tau,
                              double horizon, double delta, std::uint64_t n_paths,
                              std::uint64_t seed, unsigned threads) {
    require_paths(n_paths, 2);
    const DelayGrid grid = make_grid(tau, horizon, delta);
    const std::int64_t m = grid.total_steps();

    std::vector<std::vector<double>> squares(n_paths);
    detail::parallel_for(n_paths, threads, [&](std::uint64_t p) {
        try {
            const PathGrid path = simulate(model, xi, grid, generate(grid, model.noise_dim(), seed, p));
            auto& out = squares[p];
            out.resize(static_cast<std::size_t>(m + 1));
            for (std::int64_t l = 0; l <= m; ++l) out[l] = path.at(l).squaredNorm();
        } catch (const NonFiniteStateError&) {
            squares[p].clear();
        }
    });

    MomentReport report;
    report.delta = grid.step();
    report.n_paths = n_paths;
    std::vector<const std::vector<double>*> valid;
    for (const auto& s : squares) {
        if (s.empty()) {
            ++report.diverged_count;
        } else {
            valid.push_back(&s);
        }
    }
    if (valid.size() < 2) {
        throw Error(ErrorKind::DegenerateSampling, "fewer than two paths stayed finite");
    }

    std::vector<double> column(valid.size());
    std::int64_t best = 0;
    report.sup_mean_square = -1.0;
    for (std::int64_t l = 0; l <= m; ++l) {
        for (std::size_t p = 0; p < valid.size(); ++p) column[p] = (*valid[p])[l];
        const MeanAndError stats = mean_and_error(column);
        if (stats.mean > report.sup_mean_square) {
            report.sup_mean_square = stats.mean;
            report.std_error = stats.std_error;
            best = l;
        }
    }
    report.argmax_time = grid.time(best);

    std::vector<double> sups;
    sups.reserve(valid.size());
    for (const auto* s : valid) sups.push_back(*std::max_element(s->begin(), s->end()));
    const MeanAndError sup_stats = mean_and_error(sups);
    report.mean_sup_square = sup_stats.mean;
    report.mean_sup_std_error = sup_stats.std_error;
    return report;
}

SupBoundResult sup_bound_assert(const PathGrid& path, const NeutralFn& neutral, double kappa, double p) {
    if (!(p > 1.0)) throw Error(ErrorKind::InvalidRange, "p must exceed 1");
    if (!(kappa > 0.0 && kappa < 1.0)) throw Error(ErrorKind::InvalidRange, "kappa must lie in (0, 1)");

    const std::int64_t n = path.grid().steps_per_delay();
    const double segment = std::pow(path.segment_sup_norm(), p);
    const double segment_term = kappa / (1.0 - kappa) * segment;
    const double neutral_weight = 1.0 / std::pow(1.0 - kappa, p);

    SupBoundResult result;
    double sup_state = 0.0;
    double sup_neutral = 0.0;
    for (std::int64_t l = 0; l <= path.grid().total_steps(); ++l) {
        sup_state = std::max(sup_state, std::pow(path.at(l).norm(), p));
        const Vector shifted = path.at(l) - neutral(path.at(l - n));
        sup_neutral = std::max(sup_neutral, std::pow(shifted.norm(), p));
        const double rhs = segment_term + neutral_weight * sup_neutral;
        result.lhs = sup_state;
        result.rhs = rhs;
        if (sup_state > rhs * (1.0 + 1e-12) + 1e-300) {
            result.holds = false;
            result.first_violation = l;
            return result;
        }
    }
    return result;
}

bool power_split_holds(double a, double b, double p, double eps) {
    if (!(p > 1.0) || !(eps > 0.0)) throw Error(ErrorKind::InvalidRange, "need p > 1 and eps > 0");
    const double lhs = std::pow(std::abs(a + b), p);
    const double factor = std::pow(1.0 + std::pow(eps, 1.0 / (p - 1.0)), p - 1.0);
    const double rhs = factor * (std::pow(std::abs(a), p) + std::pow(std::abs(b), p) / eps);
    return lhs <= rhs * (1.0 + 1e-12);
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

bool exceedance_non_increasing(const ConvergenceTable& table) {
    for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
        const auto& prev = table.rows[i];
        const Interval band = wilson_interval(prev.exceed_count, prev.evaluated());
        if (table.rows[i + 1].p_hat > band.hi) return false;
    }
    return true;
}

}  // namespace nsdde
