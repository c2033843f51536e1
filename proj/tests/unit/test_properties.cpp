#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "models.hpp"
#include "nsdde/nsdde.hpp"

using namespace nsdde;
using namespace nsdde::testing;

TEST(Property, NeutralConservation) {
    const double k = 0.7;
    const NsddeModel m = builtin_pure_neutral(k, 1.0);
    const InitialSegment xi = InitialSegment::affine(Vector::Ones(1), Vector::Ones(1));
    const double invariant = xi(0.0)(0) - k * xi(-1.0)(0);
    for (double delta : {0.1, 0.05, 0.025}) {
        const DelayGrid g = make_grid(1.0, 3.0, delta);
        for (std::uint64_t p = 0; p < 20; ++p) {
            const PathGrid x = simulate(m, xi, g, generate(g, 1, 99, p));
            for (std::int64_t l = 0; l <= g.total_steps(); ++l) {
                ASSERT_NEAR(x.at(l)(0) - k * x.at(l - g.steps_per_delay())(0), invariant, 1e-12);
            }
        }
    }
}

TEST(Property, ZeroNeutralReducesToPlainDelayEuler) {
    // With D = 0 the scheme is the ordinary Euler-Maruyama step for a delay SDE.
    const NsddeModel m(
        "sdde", 1, 1, 1.0, [](const Vector& y) -> Vector { return 0.0 * y; },
        [](const Vector& x, const Vector& y, double t) -> Vector {
            return Vector::Constant(1, -x(0) + 0.5 * std::sin(y(0)) + t);
        },
        [](const Vector& x, const Vector& y, double) -> Matrix {
            return Matrix::Constant(1, 1, 0.3 + 0.1 * std::cos(x(0) * y(0)));
        });
    const DelayGrid g = make_grid(1.0, 2.0, 0.01);
    const std::int64_t n = g.steps_per_delay();
    for (std::uint64_t p = 0; p < 10; ++p) {
        const BrownianPath w = generate(g, 1, 5, p);
        const PathGrid x = simulate(m, constant_segment(0.2), g, w);
        std::vector<double> ref(static_cast<std::size_t>(n + g.total_steps() + 1), 0.2);
        for (std::int64_t l = 0; l < g.total_steps(); ++l) {
            const double xl = ref[l + n];
            const double yl = ref[l];
            const double t = g.time(l);
            ref[l + n + 1] = xl + (-xl + 0.5 * std::sin(yl) + t) * g.step() +
                             (0.3 + 0.1 * std::cos(xl * yl)) * w.increment(l)[0];
        }
        for (std::int64_t l = 0; l <= g.total_steps(); ++l) ASSERT_NEAR(x.at(l)(0), ref[l + n], 1e-13);
    }
}

TEST(Property, AdditiveNoiseExactAcrossLevels) {
    const NsddeModel m = builtin_additive_noise(2, 1.0);
    const InitialSegment xi = InitialSegment::constant(Vector::Constant(2, 0.25));
    const Ladder ladder = make_ladder(1.0, 2.0, {0.1, 0.05, 0.025});
    for (std::uint64_t p = 0; p < 20; ++p) {
        const BrownianPath w = generate(ladder.finest(), 2, 13, p);
        const PathGrid fine = simulate(m, xi, ladder.finest(), w);
        const PathGrid coarse = simulate(m, xi, ladder.grids[0], coarsen(w, 4));
        for (std::int64_t l = 0; l <= coarse.grid().total_steps(); ++l) {
            ASSERT_LE((coarse.at(l) - fine.at(4 * l)).norm(), 1e-12);
        }
    }
}

TEST(Property, PowerSplitRandomTuples) {
    std::mt19937_64 rng(20261016);
    std::uniform_real_distribution<double> ab(-10.0, 10.0), pp(1.01, 6.0), le(-4.0, 4.0);
    for (int i = 0; i < 20000; ++i) {
        const double a = ab(rng), b = ab(rng), p = pp(rng), eps = std::pow(10.0, le(rng));
        ASSERT_TRUE(power_split_holds(a, b, p, eps)) << a << ' ' << b << ' ' << p << ' ' << eps;
    }
}

TEST(Property, SupBoundNeutralCubicPaths) {
    const NsddeModel m = builtin_neutral_cubic(0.5, -1.0, -1.0, 1.0);
    const DelayGrid g = make_grid(1.0, 2.0, 0.05);
    for (std::uint64_t p = 0; p < 100; ++p) {
        const PathGrid x = simulate(m, constant_segment(1.0), g, generate(g, 1, 21, p));
        for (double q : {1.5, 2.0, 4.0}) ASSERT_TRUE(sup_bound_assert(x, m.neutral(), 0.5, q).holds);
    }
}

TEST(Property, SimulateIndependentOfPathOrder) {
    const NsddeModel m = builtin_neutral_cubic(0.5, -1.0, -1.0, 1.0);
    const DelayGrid g = make_grid(1.0, 2.0, 0.05);
    const PathGrid a = simulate(m, constant_segment(1.0), g, generate(g, 1, 2, 5));
    for (std::uint64_t p = 0; p < 5; ++p) simulate(m, constant_segment(1.0), g, generate(g, 1, 2, p));
    const PathGrid b = simulate(m, constant_segment(1.0), g, generate(g, 1, 2, 5));
    EXPECT_EQ(a.values(), b.values());
}
