#include "nsdde/model.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "nsdde/error.hpp"

namespace nsdde {

NsddeModel::NsddeModel(std::string id, int state_dim, int noise_dim, double delay,
                       NeutralFn neutral, DriftFn drift, DiffusionFn diffusion)
    : id_(std::move(id)),
      state_dim_(state_dim),
      noise_dim_(noise_dim),
      delay_(delay),
      neutral_(std::move(neutral)),
      drift_(std::move(drift)),
      diffusion_(std::move(diffusion)) {
    if (state_dim_ < 1 || noise_dim_ < 1) {
        throw Error(ErrorKind::InvalidRange, "state and noise dimensions must be >= 1");
    }
    if (!(delay_ > 0.0)) {
        throw Error(ErrorKind::InvalidRange, "delay must be positive");
    }
    if (!neutral_ || !drift_ || !diffusion_) {
        throw Error(ErrorKind::InvalidRange, "model " + id_ + " is missing a coefficient");
    }
}

NsddeModel NsddeModel::with_rates(ConditionSpec rates) const {
    rates.validate();
    NsddeModel copy = *this;
    copy.rates_ = std::move(rates);
    return copy;
}

NsddeModel NsddeModel::with_box_radius(double radius) const {
    if (!(radius > 0.0)) {
        throw Error(ErrorKind::InvalidRange, "box radius must be positive");
    }
    NsddeModel copy = *this;
    copy.box_radius_ = radius;
    return copy;
}

InitialSegment::InitialSegment(int state_dim, std::function<Vector(double)> evaluator)
    : state_dim_(state_dim), evaluator_(std::move(evaluator)) {
    if (state_dim_ < 1 || !evaluator_) {
        throw Error(ErrorKind::InvalidRange, "initial segment needs a dimension and an evaluator");
    }
}

InitialSegment InitialSegment::constant(const Vector& value) {
    return InitialSegment(static_cast<int>(value.size()), [value](double) { return value; });
}

InitialSegment InitialSegment::affine(const Vector& offset, const Vector& slope) {
    if (offset.size() != slope.size()) {
        throw Error(ErrorKind::DimensionMismatch, "affine segment offset and slope differ in size");
    }
    return InitialSegment(static_cast<int>(offset.size()),
                          [offset, slope](double theta) -> Vector { return offset + slope * theta; });
}

Vector InitialSegment::operator()(double theta) const {
    Vector v = evaluator_(theta);
    if (v.size() != state_dim_) {
        throw Error(ErrorKind::DimensionMismatch, "initial segment returned a vector of wrong size");
    }
    return v;
}

SampledSegment sample_segment(const InitialSegment& xi, const DelayGrid& grid) {
    const std::int64_t n = grid.steps_per_delay();
    SampledSegment out;
    out.values.resize(xi.state_dim(), n + 1);
    for (std::int64_t j = 0; j <= n; ++j) {
        const Vector v = xi(grid.time(j - n));
        if (!v.allFinite()) {
            throw Error(ErrorKind::InvalidRange, "initial segment is not finite on [-tau, 0]");
        }
        out.values.col(j) = v;
        out.sup_norm = std::max(out.sup_norm, v.norm());
    }
    return out;
}

namespace {

void require_contraction_parameter(double k) {
    if (!(k > -1.0 && k < 1.0)) {
        throw Error(ErrorKind::InvalidRange, "neutral coefficient k must lie in (-1, 1)");
    }
}

double kappa_for(double k) { return k == 0.0 ? 0.5 : std::abs(k); }

Vector scalar(double v) { return Vector::Constant(1, v); }

}  // namespace

ConditionSpec neutral_cubic_rates(double k, double c1, double c2, double tau, double box_radius) {
    const double ak = std::abs(k);
    const double r2 = box_radius * box_radius;
    const double p = std::sqrt(2.0 * ak + r2 * (4.0 * ak + 4.0 * k * k + 4.0 * ak * ak * ak));
    const double c_r = 3.0 + 3.0 * r2 + p;
    const double c_r_tilde = 3.0 * k * k + 2.0 * ak * ak * ak * r2 + p;

    ConditionSpec spec;
    spec.K1 = [c1, c2](double t) { return 4.0 * (std::exp(c1 * t) + std::exp(c2 * t)); };
    spec.K1_tilde = [k, c1, c2](double t) {
        return 4.0 * k * k * (std::exp(c1 * t) + std::exp(c2 * t));
    };
    spec.KR = [c_r](double) { return c_r; };
    spec.KR_tilde = [c_r_tilde](double) { return c_r_tilde; };
    spec.kappa = kappa_for(k);
    spec.C1_tau = std::max(std::exp(c1 * tau), std::exp(c2 * tau));
    spec.CR_tau = 1.0;
    spec.box_radius = box_radius;
    return spec;
}

NsddeModel builtin_neutral_cubic(double k, double c1, double c2, double tau) {
    require_contraction_parameter(k);
    if (!(c1 <= c2) || c2 > 0.0) {
        throw Error(ErrorKind::InvalidRange, "example requires c1 <= c2 <= 0");
    }
    NsddeModel model(
        "neutral_cubic", 1, 1, tau, [k](const Vector& y) -> Vector { return k * y; },
        [k, c1](const Vector& xv, const Vector& yv, double t) {
            const double x = xv[0];
            const double y = yv[0];
            const double k2 = k * k;
            const double body = 1.0 + x - k * y - x * x * x - k2 * x * y * y + k * x * x * y +
                                k2 * k * y * y * y;
            return scalar(std::exp(c1 * t) * body);
        },
        [k, c2](const Vector& xv, const Vector& yv, double t) -> Matrix {
            return Matrix::Constant(1, 1, std::exp(c2 * t) * (1.0 + xv[0] - k * yv[0]));
        });
    return model.with_rates(neutral_cubic_rates(k, c1, c2, tau, model.box_radius()));
}

NsddeModel builtin_linear_delay_ode(double a, double tau) {
    NsddeModel model(
        "linear_delay_ode", 1, 1, tau, [](const Vector& y) -> Vector { return Vector::Zero(y.size()); },
        [a](const Vector&, const Vector& y, double) -> Vector { return a * y; },
        [](const Vector& x, const Vector&, double) -> Matrix { return Matrix::Zero(x.size(), 1); });
    const double rate = std::abs(a);
    return model.with_rates(ConditionSpec::constant(rate, rate, rate, rate, 0.5, 1.0, 1.0, 2.0));
}

NsddeModel builtin_pure_neutral(double k, double tau) {
    require_contraction_parameter(k);
    NsddeModel model(
        "pure_neutral", 1, 1, tau, [k](const Vector& y) -> Vector { return k * y; },
        [](const Vector& x, const Vector&, double) -> Vector { return Vector::Zero(x.size()); },
        [](const Vector& x, const Vector&, double) -> Matrix { return Matrix::Zero(x.size(), 1); });
    return model.with_rates(ConditionSpec::constant(0.0, 0.0, 0.0, 0.0, kappa_for(k), 1.0, 1.0, 2.0));
}

NsddeModel builtin_additive_noise(int dim, double tau) {
    if (dim < 1) {
        throw Error(ErrorKind::InvalidRange, "additive noise dimension must be >= 1");
    }
    NsddeModel model(
        "additive_noise", dim, dim, tau,
        [](const Vector& y) -> Vector { return Vector::Zero(y.size()); },
        [](const Vector& x, const Vector&, double) -> Vector { return Vector::Zero(x.size()); },
        [dim](const Vector&, const Vector&, double) -> Matrix { return Matrix::Identity(dim, dim); });
    const double frob = static_cast<double>(dim);
    return model.with_rates(ConditionSpec::constant(frob, 0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 2.0));
}

NsddeModel builtin_cubic_drift(double a, double tau) {
    return NsddeModel(
        "cubic_drift", 1, 1, tau, [](const Vector& y) -> Vector { return Vector::Zero(y.size()); },
        [a](const Vector& x, const Vector&, double) -> Vector { return a * x.array().cube().matrix(); },
        [](const Vector& x, const Vector&, double) -> Matrix { return Matrix::Zero(x.size(), 1); });
}

ParamMap builtin_defaults(const std::string& id) {
    if (id == "neutral_cubic") return {{"k", 0.5}, {"c1", -1.0}, {"c2", -1.0}};
    if (id == "linear_delay_ode") return {{"a", 1.0}};
    if (id == "pure_neutral") return {{"k", 0.5}};
    if (id == "additive_noise") return {{"dim", 1.0}};
    if (id == "cubic_drift") return {{"a", 1.0}};
    throw Error(ErrorKind::UnknownName, "unknown built-in model '" + id + "'");
}

NsddeModel make_builtin(const std::string& id, const ParamMap& params, double tau,
                        double box_radius) {
    ParamMap merged = builtin_defaults(id);
    for (const auto& [name, value] : params) {
        if (!merged.count(name)) {
            throw Error(ErrorKind::UnknownName, "model '" + id + "' has no parameter '" + name + "'");
        }
        merged[name] = value;
    }

    if (id == "neutral_cubic") {
        const double k = merged["k"], c1 = merged["c1"], c2 = merged["c2"];
        return builtin_neutral_cubic(k, c1, c2, tau)
            .with_box_radius(box_radius)
            .with_rates(neutral_cubic_rates(k, c1, c2, tau, box_radius));
    }

    auto resized = [box_radius](const NsddeModel& model) {
        NsddeModel out = model.with_box_radius(box_radius);
        if (out.rates()) {
            ConditionSpec rates = *out.rates();
            rates.box_radius = box_radius;
            out = out.with_rates(std::move(rates));
        }
        return out;
    };
    if (id == "linear_delay_ode") return resized(builtin_linear_delay_ode(merged["a"], tau));
    if (id == "pure_neutral") return resized(builtin_pure_neutral(merged["k"], tau));
    if (id == "additive_noise") {
        const double dim = merged["dim"];
        if (dim != std::floor(dim) || dim < 1.0 || dim > 1024.0) {
            throw Error(ErrorKind::InvalidRange, "additive_noise dim must be a positive integer");
        }
        return resized(builtin_additive_noise(static_cast<int>(dim), tau));
    }
    return resized(builtin_cubic_drift(merged["a"], tau));
}

}  // namespace nsdde
