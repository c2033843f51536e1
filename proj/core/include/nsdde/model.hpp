#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "nsdde/condition_spec.hpp"
#include "nsdde/grid.hpp"
#include "nsdde/types.hpp"

namespace nsdde {

/// A neutral stochastic delay equation
///
///     d[X(t) - D(X(t - tau))] = b(X(t), X(t - tau), t) dt + sigma(X(t), X(t - tau), t) dB(t)
///
/// with X in R^n and B an m-dimensional Brownian motion. Immutable after
/// construction; evaluators must be pure so one model can be shared by
/// concurrent simulation workers.
class NsddeModel {
public:
    NsddeModel(std::string id, int state_dim, int noise_dim, double delay, NeutralFn neutral,
               DriftFn drift, DiffusionFn diffusion);

    const std::string& id() const noexcept { return id_; }
    int state_dim() const noexcept { return state_dim_; }
    int noise_dim() const noexcept { return noise_dim_; }
    double delay() const noexcept { return delay_; }

    const NeutralFn& neutral() const noexcept { return neutral_; }
    const DriftFn& drift() const noexcept { return drift_; }
    const DiffusionFn& diffusion() const noexcept { return diffusion_; }

    /// Recommended radius for the boxwise condition checks.
    double box_radius() const noexcept { return box_radius_; }

    /// Rate bundle shipped with the model, if any.
    const std::optional<ConditionSpec>& rates() const noexcept { return rates_; }

    NsddeModel with_rates(ConditionSpec rates) const;
    NsddeModel with_box_radius(double radius) const;

private:
    std::string id_;
    int state_dim_;
    int noise_dim_;
    double delay_;
    NeutralFn neutral_;
    DriftFn drift_;
    DiffusionFn diffusion_;
    double box_radius_ = 2.0;
    std::optional<ConditionSpec> rates_;
};

/// Initial segment xi on [-tau, 0].
class InitialSegment {
public:
    InitialSegment(int state_dim, std::function<Vector(double theta)> evaluator);

    static InitialSegment constant(const Vector& value);
    /// theta -> offset + slope * theta.
    static InitialSegment affine(const Vector& offset, const Vector& slope);

    int state_dim() const noexcept { return state_dim_; }
    Vector operator()(double theta) const;

private:
    int state_dim_;
    std::function<Vector(double)> evaluator_;
};

/// xi sampled at grid times t_{-N}, ..., t_0.
struct SampledSegment {
    /// Column j holds xi(t_{j - N}).
    Matrix values;
    /// max_j |xi(t_{j - N})|.
    double sup_norm = 0.0;
};

/// Samples xi on the grid. Throws DimensionMismatch on wrong output size and
/// InvalidRange on non-finite samples.
SampledSegment sample_segment(const InitialSegment& xi, const DelayGrid& grid);

/// The one-dimensional example
///   D(y) = k y,
///   b(x, y, t) = e^{c1 t} [1 + x - k y - x^3 - k^2 x y^2 + k x^2 y + k^3 y^3],
///   sigma(x, y, t) = e^{c2 t} (1 + x - k y),
/// with its verified rate bundle for box radius 2 attached.
/// Requires k in (-1, 1) and c1 <= c2 <= 0.
NsddeModel builtin_neutral_cubic(double k, double c1, double c2, double tau);

/// Coercivity and local monotonicity rates for the example above:
///   K1(t) = 4(e^{c1 t} + e^{c2 t}),  K1~(t) = 4 k^2 (e^{c1 t} + e^{c2 t}),
///   KR = C(R) = 3 + 3R^2 + P(R),     KR~ = C~(R) = 3k^2 + 2|k|^3 R^2 + P(R),
/// with kappa = |k| (0.5 when k = 0), C1(tau) = max(e^{c1 tau}, e^{c2 tau}) and CR(tau) = 1.
ConditionSpec neutral_cubic_rates(double k, double c1, double c2, double tau, double box_radius);

/// Deterministic delay ODE dX = a X(t - tau) dt (D = 0, sigma = 0).
NsddeModel builtin_linear_delay_ode(double a, double tau);

/// D(y) = k y, b = 0, sigma = 0. X(t) - k X(t - tau) is constant in t.
NsddeModel builtin_pure_neutral(double k, double tau);

/// D = 0, b = 0, sigma = I_dim.
NsddeModel builtin_additive_noise(int dim, double tau);

/// D = 0, b(x, y, t) = a x^3 componentwise, sigma = 0. Violates coercivity
/// for a > 0; used as a known counterexample.
NsddeModel builtin_cubic_drift(double a, double tau);

using ParamMap = std::map<std::string, double>;

/// Built-in model by id: "neutral_cubic" (k, c1, c2), "linear_delay_ode" (a),
/// "pure_neutral" (k), "additive_noise" (dim), "cubic_drift" (a).
/// Missing parameters take documented defaults; unknown ids or parameter
/// names throw UnknownName. Models with a known rate bundle get it attached
/// for the given box radius.
NsddeModel make_builtin(const std::string& id, const ParamMap& params, double tau,
                        double box_radius = 2.0);

/// Parameter names accepted by make_builtin for id, with their defaults.
ParamMap builtin_defaults(const std::string& id);

}  // namespace nsdde
