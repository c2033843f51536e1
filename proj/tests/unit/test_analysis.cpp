#include <gtest/gtest.h>

#include <cmath>

#include "models.hpp"
#include "nsdde/nsdde.hpp"

using namespace nsdde;
using namespace nsdde::testing;

TEST(Ladder, Validation) {
    const Ladder l = make_ladder(1.0, 2.0, {0.1, 0.05, 0.025});
    ASSERT_EQ(l.grids.size(), 3u);
    EXPECT_EQ(l.ratios, (std::vector<std::int64_t>{4, 2, 1}));
    EXPECT_EQ(l.finest().total_steps(), 80);
    try {
        make_ladder(1.0, 2.0, {0.1, 0.07});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonDivisibleStep);
    }
    try {
        make_ladder(1.0, 2.0, {0.1, 0.04});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonDivisibleStep);
    }
    EXPECT_THROW(make_ladder(1.0, 2.0, {0.05, 0.1}), Error);
    EXPECT_THROW(make_ladder(1.0, 2.0, {}), Error);
}

TEST(ConvergeStudy, AdditiveNoiseExact) {
    const ConvergenceTable t = converge_study(builtin_additive_noise(1, 1.0), constant_segment(0.0),
                                              1.0, 2.0, {0.1, 0.05, 0.025}, 1e-9, 50, 4);
    ASSERT_EQ(t.rows.size(), 2u);
    for (const LevelPairRow& r : t.rows) {
        EXPECT_EQ(r.exceed_count, 0u);
        EXPECT_EQ(r.p_hat, 0.0);
        EXPECT_LE(r.max_sup_diff, 1e-12);
    }
}

TEST(ConvergeStudy, LinearDelayHalvesPerLevel) {
    const ConvergenceTable t = converge_study(builtin_linear_delay_ode(1.0, 1.0), constant_segment(1.0),
                                              1.0, 2.0, {0.1, 0.05, 0.025, 0.0125}, 0.01, 3, 0);
    ASSERT_EQ(t.rows.size(), 3u);
    for (const LevelPairRow& r : t.rows) {
        EXPECT_EQ(r.sup_diffs[0], r.sup_diffs[1]);
        EXPECT_EQ(r.sup_diffs[0], r.sup_diffs[2]);
    }
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        const double ratio = t.rows[i - 1].mean_sup_diff / t.rows[i].mean_sup_diff;
        EXPECT_NEAR(ratio, 2.0, 0.4);
    }
}

TEST(ConvergeStudy, ThreadCountDoesNotMatter) {
    const NsddeModel m = builtin_neutral_cubic(0.5, -1.0, -1.0, 1.0);
    const ConvergenceTable a = converge_study(m, constant_segment(1.0), 1.0, 2.0, {0.1, 0.05}, 0.1, 40, 8, 1);
    const ConvergenceTable b = converge_study(m, constant_segment(1.0), 1.0, 2.0, {0.1, 0.05}, 0.1, 40, 8, 3);
    EXPECT_EQ(a.rows[0].sup_diffs, b.rows[0].sup_diffs);
}

TEST(ConvergeStudy, ExceedanceMonotoneInEpsilon) {
    const ConvergenceTable t = converge_study(builtin_neutral_cubic(0.5, -1.0, -1.0, 1.0),
                                              constant_segment(1.0), 1.0, 2.0, {0.1, 0.05, 0.025},
                                              0.1, 200, 2);
    for (const LevelPairRow& r : t.rows) {
        double previous = 1.0;
        for (double eps : {0.01, 0.05, 0.1, 0.2, 0.5, 1.0}) {
            const double p = r.p_hat_at(eps);
            EXPECT_LE(p, previous);
            previous = p;
        }
        EXPECT_DOUBLE_EQ(r.p_hat_at(0.1), r.p_hat);
    }
}

TEST(ConvergeStudy, NeedsTwoLevels) {
    EXPECT_THROW(converge_study(builtin_additive_noise(1, 1.0), constant_segment(0.0), 1.0, 2.0,
                                {0.1}, 0.1, 5, 0),
                 Error);
}

TEST(Perturbation, SawtoothClosedForm) {
    const NsddeModel m = scalar_model(0.0, 1.0, 0.0);
    const PerturbationTable t = perturbation_integrability(
        m, constant_segment(0.0), 1.0, 2.0, {0.1, 0.05, 0.025}, 3, 0, 1e6,
        [](double) { return 2.0; });
    ASSERT_EQ(t.rows.size(), 3u);
    for (const PerturbationRow& r : t.rows) {
        const double expected = std::round(2.0 / r.delta) * r.delta * r.delta / 2.0;
        EXPECT_NEAR(r.mean_abs_integral, expected, 1e-10 * expected) << r.delta;
        EXPECT_NEAR(r.mean_lambda, 2.0 * expected, 2e-10 * expected);
        EXPECT_NEAR(r.se_abs_integral, 0.0, 1e-15);
    }
}

TEST(Perturbation, ZeroCoefficients) {
    const PerturbationTable t = perturbation_integrability(
        scalar_model(0.0, 0.0, 0.0), constant_segment(1.0), 1.0, 2.0, {0.1, 0.05}, 3, 0, 30.0,
        [](double) { return 1.0; });
    for (const PerturbationRow& r : t.rows) EXPECT_EQ(r.mean_abs_integral, 0.0);
}

TEST(Perturbation, Truncation) {
    // X(t) = t crosses R/3 = 1 at t = 1: the integral stops there.
    const NsddeModel m = scalar_model(0.0, 1.0, 0.0);
    const DelayGrid fine = make_grid(1.0, 2.0, 0.05);
    const DelayGrid coarse = fine.coarsened(2);
    const BrownianPath w = zero_noise(fine);
    const PathGrid x = simulate(m, constant_segment(0.0), coarse, coarsen(w, 2));
    const PathGrid r = refine_to(x, m, constant_segment(0.0), fine, w);
    const PerturbationIntegrals full = integrate_perturbation(r, 2, 1e6, [](double) { return 1.0; });
    const PerturbationIntegrals cut = integrate_perturbation(r, 2, 2.9, [](double) { return 1.0; });
    EXPECT_FALSE(full.truncated);
    EXPECT_TRUE(cut.truncated);
    EXPECT_NEAR(full.abs_integral, 20 * 0.01 / 2.0, 1e-14);
    EXPECT_LT(cut.abs_integral, full.abs_integral);
}

TEST(Moments, ConstantPath) {
    const MomentReport r = estimate_moments(builtin_pure_neutral(0.5, 1.0), constant_segment(1.0), 1.0,
                                            2.0, 0.1, 10, 0);
    EXPECT_EQ(r.sup_mean_square, 1.0);
    EXPECT_EQ(r.mean_sup_square, 1.0);
    EXPECT_EQ(r.diverged_count, 0u);
}

TEST(Moments, BrownianVariance) {
    const MomentReport r = estimate_moments(builtin_additive_noise(1, 1.0), constant_segment(0.0), 1.0,
                                            2.0, 0.05, 2000, 17);
    EXPECT_LE(std::abs(r.sup_mean_square - 2.0), 3.0 * r.std_error);
    EXPECT_THROW(estimate_moments(builtin_additive_noise(1, 1.0), constant_segment(0.0), 1.0, 2.0,
                                  0.05, 1, 17),
                 Error);
}

TEST(PowerSplit, Sweep) {
    EXPECT_TRUE(power_split_holds(1.0, 1.0, 2.0, 1.0));
    EXPECT_TRUE(power_split_holds(-3.0, 0.5, 1.5, 0.01));
    EXPECT_TRUE(power_split_holds(0.0, 0.0, 4.0, 10.0));
}

TEST(SupBound, DominationOnZeroNeutral) {
    const DelayGrid g = make_grid(1.0, 2.0, 0.1);
    const PathGrid x = simulate(builtin_additive_noise(1, 1.0), constant_segment(0.3), g, generate(g, 1, 1, 1));
    const SupBoundResult r = sup_bound_assert(x, [](const Vector& y) -> Vector { return 0.0 * y; }, 0.5, 2.0);
    EXPECT_TRUE(r.holds);
    EXPECT_FALSE(r.first_violation.has_value());
}

TEST(SupBound, ConstantPath) {
    const DelayGrid g = make_grid(1.0, 2.0, 0.1);
    const NsddeModel m = builtin_pure_neutral(0.5, 1.0);
    const PathGrid x = simulate(m, constant_segment(1.0), g, zero_noise(g));
    const SupBoundResult r = sup_bound_assert(x, m.neutral(), 0.5, 2.0);
    EXPECT_TRUE(r.holds);
    EXPECT_DOUBLE_EQ(r.lhs, 1.0);
    EXPECT_DOUBLE_EQ(r.rhs, 1.0 + 4.0 * 0.25);
}

TEST(SupBound, DetectsWrongKappa) {
    // D(y) = 0.9 y claimed as a 0.1-contraction: the bound fails on a constant path.
    const DelayGrid g = make_grid(1.0, 2.0, 0.1);
    const NsddeModel m = builtin_pure_neutral(0.9, 1.0);
    const PathGrid x = simulate(m, constant_segment(1.0), g, zero_noise(g));
    const SupBoundResult r = sup_bound_assert(x, m.neutral(), 0.1, 2.0);
    EXPECT_FALSE(r.holds);
    ASSERT_TRUE(r.first_violation.has_value());
    EXPECT_GT(r.lhs, r.rhs);
}

TEST(Wilson, KnownValues) {
    const Interval i = wilson_interval(0, 100);
    EXPECT_NEAR(i.lo, 0.0, 1e-15);
    EXPECT_NEAR(i.hi, 0.036995, 1e-5);
    const Interval h = wilson_interval(50, 100);
    EXPECT_NEAR(h.lo, 0.403832, 1e-5);
    EXPECT_NEAR(h.hi, 0.596168, 1e-5);
}

TEST(Wilson, TrendTest) {
    ConvergenceTable t;
    LevelPairRow a, b;
    a.p_hat = 0.5;
    a.exceed_count = 50;
    a.sup_diffs.assign(100, 0.0);
    b = a;
    b.p_hat = 0.55;
    b.exceed_count = 55;
    t.rows = {a, b};
    EXPECT_TRUE(exceedance_non_increasing(t));
    t.rows[1].p_hat = 0.7;
    t.rows[1].exceed_count = 70;
    EXPECT_FALSE(exceedance_non_increasing(t));
}
