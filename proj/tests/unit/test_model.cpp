#include <gtest/gtest.h>

#include <cmath>

#include "nsdde/nsdde.hpp"

using namespace nsdde;

namespace {

Vector v1(double x) { return Vector::Constant(1, x); }

}  // namespace

TEST(NeutralCubicModel, DriftAtKZero) {
    const NsddeModel m = builtin_neutral_cubic(0.0, 0.0, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(m.drift()(v1(1.0), v1(5.0), 0.0)(0), 1.0);
}

TEST(NeutralCubicModel, DriftAndDiffusionAtHalf) {
    const NsddeModel m = builtin_neutral_cubic(0.5, 0.0, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(m.drift()(v1(0.0), v1(0.0), 0.0)(0), 1.0);
    EXPECT_DOUBLE_EQ(m.diffusion()(v1(1.0), v1(1.0), 0.0)(0, 0), 1.5);
    EXPECT_DOUBLE_EQ(m.neutral()(v1(3.0))(0), 1.5);
}

TEST(NeutralCubicModel, TimeFactors) {
    const NsddeModel m = builtin_neutral_cubic(0.5, -1.0, -0.5, 1.0);
    EXPECT_NEAR(m.drift()(v1(0.0), v1(0.0), 2.0)(0), std::exp(-2.0), 1e-15);
    EXPECT_NEAR(m.diffusion()(v1(0.0), v1(0.0), 2.0)(0, 0), std::exp(-1.0), 1e-15);
}

TEST(NeutralCubicModel, RejectsBadParameters) {
    EXPECT_THROW(builtin_neutral_cubic(1.5, -1.0, -1.0, 1.0), Error);
    EXPECT_THROW(builtin_neutral_cubic(0.5, -0.5, -1.0, 1.0), Error);
    EXPECT_THROW(builtin_neutral_cubic(0.5, 0.5, 0.5, 1.0), Error);
}

TEST(NeutralCubicModel, RateBundle) {
    const ConditionSpec r = neutral_cubic_rates(0.5, -1.0, -1.0, 1.0, 2.0);
    EXPECT_NEAR(r.K1(0.0), 8.0, 1e-15);
    EXPECT_NEAR(r.K1_tilde(0.0), 2.0, 1e-15);
    const double p = std::sqrt(1.0 + 4.0 * (2.0 + 1.0 + 0.5));
    EXPECT_NEAR(r.KR(0.0), 3.0 + 12.0 + p, 1e-12);
    EXPECT_NEAR(r.KR_tilde(0.0), 0.75 + 1.0 + p, 1e-12);
    EXPECT_DOUBLE_EQ(r.kappa, 0.5);
    EXPECT_NEAR(r.C1_tau, std::exp(-1.0), 1e-15);
    EXPECT_NO_THROW(r.validate());
}

TEST(Builtins, ByName) {
    EXPECT_EQ(make_builtin("neutral_cubic", {}, 1.0).id(), "neutral_cubic");
    EXPECT_TRUE(make_builtin("neutral_cubic", {}, 1.0).rates().has_value());
    EXPECT_EQ(make_builtin("additive_noise", {{"dim", 3}}, 1.0).state_dim(), 3);
    EXPECT_FALSE(make_builtin("cubic_drift", {}, 1.0).rates().has_value());
    try {
        make_builtin("nope", {}, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnknownName);
    }
    try {
        make_builtin("neutral_cubic", {{"q", 1.0}}, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnknownName);
    }
}

TEST(InitialSegment, SamplesOnGrid) {
    const DelayGrid g = make_grid(1.0, 2.0, 0.5);
    const SampledSegment s = sample_segment(InitialSegment::affine(v1(1.0), v1(1.0)), g);
    ASSERT_EQ(s.values.cols(), 3);
    EXPECT_DOUBLE_EQ(s.values(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(s.values(0, 1), 0.5);
    EXPECT_DOUBLE_EQ(s.values(0, 2), 1.0);
    EXPECT_DOUBLE_EQ(s.sup_norm, 1.0);
}

TEST(InitialSegment, WrongDimensionThrows) {
    const DelayGrid g = make_grid(1.0, 2.0, 0.5);
    const InitialSegment bad(2, [](double) { return Vector::Zero(3); });
    EXPECT_THROW(sample_segment(bad, g), Error);
}

TEST(ConditionSpec, Validation) {
    EXPECT_NO_THROW(ConditionSpec::constant(1, 1, 1, 1, 0.5, 1, 1, 2).validate());
    EXPECT_THROW(ConditionSpec::constant(1, 1, 1, 1, 1.0, 1, 1, 2).validate(), Error);
    EXPECT_THROW(ConditionSpec::constant(1, 1, 1, 1, 0.5, 3, 1, 2).validate(), Error);
    EXPECT_THROW(ConditionSpec{}.validate(), Error);
}
