#pragma once

#include "nsdde/types.hpp"

namespace nsdde {

/// Rate bundle accompanying a model: the coercivity rates (K1, K1_tilde),
/// the local monotonicity rates (KR, KR_tilde) for one box radius, the
/// contraction constant of D and the delay growth constants.
///
/// Rates are evaluated on [-tau, T]; the tilde rates are always called at
/// t - tau by the checkers.
struct ConditionSpec {
    RateFn K1;
    RateFn K1_tilde;
    RateFn KR;
    RateFn KR_tilde;
    double kappa = 0.5;
    double C1_tau = 1.0;
    double CR_tau = 1.0;
    double box_radius = 2.0;

    /// Throws InvalidRange unless kappa in (0,1), the growth constants are
    /// positive with max(C1_tau, CR_tau) <= 1/kappa, box_radius > 0 and all
    /// four rates are set.
    void validate() const;

    /// Bundle with every rate constant in time.
    static ConditionSpec constant(double k1, double k1_tilde, double kr, double kr_tilde,
                                  double kappa, double c1_tau, double cr_tau, double box_radius);
};

}  // namespace nsdde
