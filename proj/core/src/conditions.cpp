#include "nsdde/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "nsdde/brownian.hpp"
#include "nsdde/error.hpp"

namespace nsdde {

namespace {

// Stream salts keep the draws of different checkers independent under one seed.
constexpr std::uint64_t kSaltC2 = 0xc2;
constexpr std::uint64_t kSaltC3 = 0xc3;
constexpr std::uint64_t kSaltC4 = 0xc4;
constexpr std::uint64_t kSaltH = 0x48;
constexpr std::uint64_t kSaltKappa = 0x6b;
constexpr std::uint64_t kSaltFit = 0xf1;

class Sampler {
public:
    Sampler(std::uint64_t seed, std::uint64_t salt) : engine_(derive_stream_key(seed, salt)) {}

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    Vector cube(int dim, double radius) {
        Vector v(dim);
        for (int i = 0; i < dim; ++i) v[i] = uniform(-radius, radius);
        return v;
    }

    // Uniform in the closed Euclidean ball.
    Vector ball(int dim, double radius) {
        if (dim == 1) return cube(1, radius);
        Vector v(dim);
        for (int i = 0; i < dim; ++i) {
            const double r = std::sqrt(-2.0 * std::log(1.0 - unit()));
            v[i] = r * std::cos(2.0 * std::numbers::pi * unit());
        }
        const double norm = v.norm();
        if (norm == 0.0) return Vector::Zero(dim);
        return v * (radius * std::pow(unit(), 1.0 / dim) / norm);
    }

    std::int64_t index(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

private:
    std::mt19937_64 engine_;
};

std::vector<double> concat(std::initializer_list<const Vector*> parts) {
    std::vector<double> out;
    for (const Vector* p : parts) out.insert(out.end(), p->data(), p->data() + p->size());
    return out;
}

class ReportBuilder {
public:
    ReportBuilder(std::string id, std::uint64_t requested) {
        report_.condition_id = std::move(id);
        report_.samples_requested = requested;
    }

    void tested() { ++report_.samples_tested; }

    // Records a violation when lhs exceeds rhs by more than the slack or either
    // side is not finite.
    bool compare(std::uint64_t sample, const char* kind, std::vector<double> inputs, double t,
                 double lhs, double rhs) {
        if (std::isfinite(lhs) && std::isfinite(rhs) && lhs <= rhs + kInequalitySlack) return false;
        violations_.push_back(Violation{sample, kind, std::move(inputs), t, lhs, rhs});
        return true;
    }

    void flag(std::uint64_t sample, const char* kind, std::vector<double> inputs, double t,
              double lhs, double rhs) {
        violations_.push_back(Violation{sample, kind, std::move(inputs), t, lhs, rhs});
    }

    void estimate(const std::string& name, double value) { report_.estimates[name] = value; }

    ConditionReport finish() {
        std::stable_sort(violations_.begin(), violations_.end(),
                         [](const Violation& a, const Violation& b) {
                             return a.sample_index < b.sample_index;
                         });
        report_.violation_count = violations_.size();
        if (violations_.size() > kMaxViolations) violations_.resize(kMaxViolations);
        report_.violations = std::move(violations_);
        if (report_.violation_count > 0) {
            report_.verdict = Verdict::Fail;
        } else if (report_.samples_tested >= report_.samples_requested) {
            report_.verdict = Verdict::Pass;
        } else {
            report_.verdict = Verdict::Inconclusive;
        }
        return std::move(report_);
    }

private:
    ConditionReport report_;
    std::vector<Violation> violations_;
};

// Rate inequalities K(t) <= C K(t - tau), K(t) >= K~(t), and K, K~ >= 0 on
// every grid time of [-tau, T]. Indexed after all point samples.
void check_rates(ReportBuilder& report, const DelayGrid& grid, const RateFn& rate,
                 const RateFn& rate_tilde, double growth, std::uint64_t first_index) {
    const double tau = grid.tau();
    std::uint64_t index = first_index;
    for (std::int64_t l = -grid.steps_per_delay(); l <= grid.total_steps(); ++l, ++index) {
        const double t = grid.time(l);
        const double k = rate(t);
        const double kt = rate_tilde(t);
        report.compare(index, "rate_nonnegative", {t}, t, -std::min(k, kt), 0.0);
        if (l < 0) continue;
        report.compare(index, "rate_growth", {t}, t, k, growth * rate(t - tau));
        report.compare(index, "rate_order", {t}, t, kt, k);
    }
}

double frob2(const Matrix& m) { return m.squaredNorm(); }

std::vector<Vector> corner_points(int dim, double radius, bool ball) {
    const Vector ones = Vector::Ones(dim) * (ball ? radius / std::sqrt(double(dim)) : radius);
    return {Vector::Zero(dim), ones, Vector(-ones)};
}

void require_positive(double box, std::uint64_t samples) {
    if (!(box > 0.0)) throw Error(ErrorKind::InvalidRange, "box radius must be positive");
    if (samples < 1) throw Error(ErrorKind::InvalidRange, "at least one sample is required");
}

void require_grid(const NsddeModel& model, const DelayGrid& grid) {
    if (model.delay() != grid.tau()) {
        throw Error(ErrorKind::IncompatibleGrids, "model delay differs from grid tau");
    }
}

}  // namespace

const char* to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

ConditionReport check_c4(const NeutralFn& neutral, int state_dim, double kappa, double box,
                         std::uint64_t samples, std::uint64_t seed) {
    if (!(kappa > 0.0 && kappa < 1.0)) throw Error(ErrorKind::InvalidRange, "kappa must lie in (0, 1)");
    require_positive(box, samples);
    if (state_dim < 1) throw Error(ErrorKind::InvalidRange, "state dimension must be >= 1");

    ReportBuilder report("C4", samples);
    std::uint64_t index = 0;

    const Vector origin = Vector::Zero(state_dim);
    report.compare(index++, "neutral_origin", concat({&origin}), 0.0, neutral(origin).norm(), 0.0);

    std::vector<std::pair<Vector, Vector>> pairs;
    Vector e1 = Vector::Zero(state_dim);
    e1[0] = box;
    const Vector corner = Vector::Ones(state_dim) * box;
    pairs.emplace_back(e1, origin);
    pairs.emplace_back(corner, -corner);
    pairs.emplace_back(corner, corner);

    Sampler sampler(seed, kSaltC4);
    double max_ratio = 0.0;
    auto test_pair = [&](const Vector& x, const Vector& y) {
        const double lhs = (neutral(x) - neutral(y)).norm();
        const double gap = (x - y).norm();
        if (gap > 1e-9) max_ratio = std::max(max_ratio, lhs / gap);
        report.compare(index++, "contraction", concat({&x, &y}), 0.0, lhs, kappa * gap);
        report.tested();
    };
    for (const auto& [x, y] : pairs) test_pair(x, y);
    for (std::uint64_t s = 0; s < samples; ++s) {
        const Vector x = sampler.cube(state_dim, box);
        const Vector y = sampler.cube(state_dim, box);
        test_pair(x, y);
    }
    report.estimate("kappa", kappa);
    report.estimate("empirical_lipschitz", max_ratio);
    return report.finish();
}

ConditionReport check_c2(const NsddeModel& model, const ConditionSpec& spec, const DelayGrid& grid,
                         std::uint64_t samples, std::uint64_t seed) {
    spec.validate();
    require_positive(spec.box_radius, samples);
    require_grid(model, grid);

    const int n = model.state_dim();
    const double tau = grid.tau();
    ReportBuilder report("C2", samples);
    std::uint64_t index = 0;
    double worst_gap = -std::numeric_limits<double>::infinity();

    auto test_point = [&](const Vector& x, const Vector& y, double t) {
        const Vector b = model.drift()(x, y, t);
        const Matrix s = model.diffusion()(x, y, t);
        const double lhs = 2.0 * (x - model.neutral()(y)).dot(b) + frob2(s);
        const double rhs = spec.K1(t) * (1.0 + x.squaredNorm()) +
                           spec.K1_tilde(t - tau) * (1.0 + y.squaredNorm());
        worst_gap = std::max(worst_gap, lhs - rhs);
        std::vector<double> inputs = concat({&x, &y});
        report.compare(index++, "coercivity", std::move(inputs), t, lhs, rhs);
        report.tested();
    };

    const auto corners = corner_points(n, spec.box_radius, false);
    for (std::int64_t l : {std::int64_t{0}, grid.total_steps()}) {
        for (const Vector& x : corners) {
            for (const Vector& y : corners) test_point(x, y, grid.time(l));
        }
    }
    Sampler sampler(seed, kSaltC2);
    for (std::uint64_t s = 0; s < samples; ++s) {
        const Vector x = sampler.cube(n, spec.box_radius);
        const Vector y = sampler.cube(n, spec.box_radius);
        test_point(x, y, grid.time(sampler.index(0, grid.total_steps())));
    }
    check_rates(report, grid, spec.K1, spec.K1_tilde, spec.C1_tau, index);
    report.estimate("max_lhs_minus_rhs", worst_gap);
    report.estimate("C1_tau", spec.C1_tau);
    return report.finish();
}

ConditionReport check_c3(const NsddeModel& model, const ConditionSpec& spec, const DelayGrid& grid,
                         std::uint64_t samples, std::uint64_t seed) {
    spec.validate();
    require_positive(spec.box_radius, samples);
    require_grid(model, grid);

    const int n = model.state_dim();
    const double tau = grid.tau();
    const double radius = spec.box_radius;
    ReportBuilder report("C3", samples);
    std::uint64_t index = 0;
    double worst_gap = -std::numeric_limits<double>::infinity();

    auto test_point = [&](const Vector& x, const Vector& y, const Vector& xb, const Vector& yb,
                          double t) {
        const Vector db = model.drift()(x, y, t) - model.drift()(xb, yb, t);
        const Matrix ds = model.diffusion()(x, y, t) - model.diffusion()(xb, yb, t);
        const Vector shift = x - model.neutral()(y) - xb + model.neutral()(yb);
        const double lhs = 2.0 * shift.dot(db) + frob2(ds);
        const double rhs = spec.KR(t) * (x - xb).squaredNorm() +
                           spec.KR_tilde(t - tau) * (y - yb).squaredNorm();
        worst_gap = std::max(worst_gap, lhs - rhs);
        report.compare(index++, "monotonicity", concat({&x, &y, &xb, &yb}), t, lhs, rhs);
        report.tested();
    };

    const auto corners = corner_points(n, radius, true);
    for (std::int64_t l : {std::int64_t{0}, grid.total_steps()}) {
        const double t = grid.time(l);
        for (const Vector& x : corners) {
            for (const Vector& y : corners) {
                test_point(x, y, x, y, t);
                for (const Vector& xb : corners) {
                    for (const Vector& yb : corners) test_point(x, y, xb, yb, t);
                }
            }
        }
    }
    Sampler sampler(seed, kSaltC3);
    for (std::uint64_t s = 0; s < samples; ++s) {
        const Vector x = sampler.ball(n, radius);
        const Vector y = sampler.ball(n, radius);
        const Vector xb = sampler.ball(n, radius);
        const Vector yb = sampler.ball(n, radius);
        test_point(x, y, xb, yb, grid.time(sampler.index(0, grid.total_steps())));
    }
    check_rates(report, grid, spec.KR, spec.KR_tilde, spec.CR_tau, index);
    report.estimate("max_lhs_minus_rhs", worst_gap);
    report.estimate("CR_tau", spec.CR_tau);
    return report.finish();
}

ConditionReport check_h(const NsddeModel& model, const DelayGrid& grid, double box,
                        std::uint64_t samples, std::uint64_t seed) {
    require_positive(box, samples);
    require_grid(model, grid);

    const int n = model.state_dim();
    const auto points = static_cast<std::uint64_t>(grid.total_steps() + 1);
    ReportBuilder report("H", samples * points);
    Sampler sampler(seed, kSaltH);
    const auto corners = corner_points(n, box, true);
    std::uint64_t index = 0;
    double integral = 0.0;

    for (std::int64_t l = 0; l <= grid.total_steps(); ++l) {
        const double t = grid.time(l);
        double sup = 0.0;
        auto test_point = [&](const Vector& x, const Vector& y) {
            const double value = model.drift()(x, y, t).norm() + frob2(model.diffusion()(x, y, t));
            if (std::isfinite(value)) {
                sup = std::max(sup, value);
            } else {
                report.flag(index, "non_finite", concat({&x, &y}), t, value,
                            std::numeric_limits<double>::max());
                sup = std::numeric_limits<double>::infinity();
            }
            ++index;
            report.tested();
        };
        for (const Vector& x : corners) {
            for (const Vector& y : corners) test_point(x, y);
        }
        for (std::uint64_t s = 0; s < samples; ++s) {
            const Vector x = sampler.ball(n, box);
            const Vector y = sampler.ball(n, box);
            test_point(x, y);
        }
        if (l < grid.total_steps()) integral += sup * grid.step();
    }
    report.estimate("integral", integral);
    return report.finish();
}

double estimate_kappa(const NeutralFn& neutral, int state_dim, double box, std::uint64_t samples,
                      std::uint64_t seed) {
    require_positive(box, samples);
    Sampler sampler(seed, kSaltKappa);
    double best = 0.0;
    std::uint64_t used = 0;
    auto take = [&](const Vector& x, const Vector& y) {
        const double gap = (x - y).norm();
        if (gap < 1e-9) return;
        best = std::max(best, (neutral(x) - neutral(y)).norm() / gap);
        ++used;
    };
    Vector e1 = Vector::Zero(state_dim);
    e1[0] = box;
    take(e1, Vector::Zero(state_dim));
    for (std::uint64_t s = 0; s < samples; ++s) {
        const Vector x = sampler.cube(state_dim, box);
        const Vector y = sampler.cube(state_dim, box);
        take(x, y);
    }
    if (used == 0) throw Error(ErrorKind::DegenerateSampling, "every sampled pair was degenerate");
    return best;
}

FittedRates fit_constant_rates(const NsddeModel& model, const DelayGrid& grid, double box,
                               std::uint64_t samples, std::uint64_t seed) {
    require_positive(box, samples);
    require_grid(model, grid);
    const int n = model.state_dim();
    Sampler sampler(seed, kSaltFit);
    FittedRates fit;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const double t = grid.time(sampler.index(0, grid.total_steps()));
        const Vector x = sampler.ball(n, box);
        const Vector y = sampler.ball(n, box);
        const Vector xb = sampler.ball(n, box);
        const Vector yb = sampler.ball(n, box);

        const double coercive = 2.0 * (x - model.neutral()(y)).dot(model.drift()(x, y, t)) +
                                frob2(model.diffusion()(x, y, t));
        fit.k1 = std::max(fit.k1, coercive / (2.0 + x.squaredNorm() + y.squaredNorm()));

        const double gap = (x - xb).squaredNorm() + (y - yb).squaredNorm();
        if (gap < 1e-18) continue;
        const Vector shift = x - model.neutral()(y) - xb + model.neutral()(yb);
        const double mono =
            2.0 * shift.dot(model.drift()(x, y, t) - model.drift()(xb, yb, t)) +
            frob2(model.diffusion()(x, y, t) - model.diffusion()(xb, yb, t));
        fit.kr = std::max(fit.kr, mono / gap);
    }
    return fit;
}

}  // namespace nsdde
