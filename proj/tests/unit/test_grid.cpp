#include <gtest/gtest.h>

#include "nsdde/nsdde.hpp"

using namespace nsdde;

namespace {

ErrorKind kind_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::UnknownName;
}

}  // namespace

TEST(MakeGrid, ExactDivision) {
    const DelayGrid g = make_grid(1.0, 2.0, 0.1);
    EXPECT_EQ(g.steps_per_delay(), 10);
    EXPECT_EQ(g.total_steps(), 20);

    const DelayGrid h = make_grid(0.5, 1.5, 0.25);
    EXPECT_EQ(h.steps_per_delay(), 2);
    EXPECT_EQ(h.total_steps(), 6);
}

TEST(MakeGrid, RejectsNonDividingStep) {
    EXPECT_EQ(kind_of([] { make_grid(1.0, 2.0, 0.3); }), ErrorKind::NonDivisibleStep);
    EXPECT_EQ(kind_of([] { make_grid(1.0, 2.5, 0.2); }), ErrorKind::NonDivisibleStep);
}

TEST(MakeGrid, RejectsBadRanges) {
    EXPECT_EQ(kind_of([] { make_grid(0.0, 2.0, 0.1); }), ErrorKind::InvalidRange);
    EXPECT_EQ(kind_of([] { make_grid(1.0, 1.0, 0.1); }), ErrorKind::InvalidRange);
    EXPECT_EQ(kind_of([] { make_grid(1.0, 2.0, 0.0); }), ErrorKind::InvalidRange);
    EXPECT_EQ(kind_of([] { make_grid(1.0, 2.0, 1.0); }), ErrorKind::InvalidRange);
}

TEST(DelayGrid, TimesComeFromIndices) {
    const DelayGrid g = make_grid(1.0, 2.0, 0.1);
    EXPECT_EQ(g.time(0), 0.0);
    EXPECT_EQ(g.time(10), 1.0);
    EXPECT_EQ(g.time(-10), -1.0);
    EXPECT_EQ(g.time(20), 2.0);
    EXPECT_EQ(g.time(-3), -g.time(3));
    for (std::int64_t l = -10; l <= 10; ++l) EXPECT_NEAR(g.time(l + 10) - 1.0, g.time(l), 1e-15);
}

TEST(DelayGrid, Coarsening) {
    const DelayGrid g = make_grid(1.0, 2.0, 0.05);
    const DelayGrid c = g.coarsened(2);
    EXPECT_EQ(c, make_grid(1.0, 2.0, 0.1));
    EXPECT_EQ(g.ratio_from(c), 2);
    EXPECT_EQ(g.ratio_from(g), 1);
    EXPECT_EQ(kind_of([&] { g.coarsened(3); }), ErrorKind::IncompatibleFactor);
    EXPECT_EQ(kind_of([&] { c.ratio_from(g); }), ErrorKind::IncompatibleGrids);
}
