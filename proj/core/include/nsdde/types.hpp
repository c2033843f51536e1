#pragma once

#include <functional>

#include <Eigen/Dense>

namespace nsdde {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Neutral map D: R^n -> R^n.
using NeutralFn = std::function<Vector(const Vector& y)>;
/// Drift b(x, y, t) with x the current and y the delayed state.
using DriftFn = std::function<Vector(const Vector& x, const Vector& y, double t)>;
/// Diffusion sigma(x, y, t), an n x m matrix.
using DiffusionFn = std::function<Matrix(const Vector& x, const Vector& y, double t)>;
/// Nonnegative time-dependent rate, defined on [-tau, T].
using RateFn = std::function<double(double t)>;

}  // namespace nsdde
