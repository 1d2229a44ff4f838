#include <gtest/gtest.h>

#include "hyperdual/contour.hpp"
#include "hyperdual/integrand.hpp"

using namespace hyperdual;

namespace {

void expect_closed(const LoopPath& p) {
    EXPECT_NEAR(std::abs(p.point(0.0) - (p.center + p.truncation * std::polar(1.0, p.anchor))), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(p.point(0.0) - p.point(1.0)), 0.0, 1e-9 * p.truncation);
    EXPECT_LT(p.radius, p.truncation);
}

}  // namespace

TEST(LoopPath, ClosedAndCounterclockwise) {
    const auto c = build_delta(1);
    ASSERT_EQ(c.loops.size(), 1u);
    expect_closed(c.loops[0]);
    EXPECT_EQ(winding_number(c.loops[0]), 1);
}

TEST(LoopPath, DerivativeMatchesDifferenceQuotient) {
    const auto p = build_delta(1).loops[0];
    for (double tau : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double h = 1e-6;
        const cplx fd = (p.point(tau + h) - p.point(tau - h)) / (2 * h);
        EXPECT_NEAR(std::abs(fd - p.derivative(tau)), 0.0, 1e-5 * std::abs(fd));
    }
}

TEST(MultiLoop, OneLoopAroundEachCenter) {
    const auto c = build_multi_loop({0, 2}, 2, 1);
    ASSERT_EQ(c.loops.size(), 2u);
    EXPECT_EQ(c.loops[0].center, cplx(0, 2));
    EXPECT_EQ(c.loops[1].center, cplx(0, 0));
    EXPECT_GT(min_loop_distance(c.loops[0], c.loops[1]), 0.0);
    for (const auto& p : c.loops) expect_closed(p);
}

TEST(MultiLoop, DeltaIsNestedAroundZero) {
    const auto c = build_delta(3);
    ASSERT_EQ(c.loops.size(), 3u);
    for (int u = 0; u < 3; ++u) {
        EXPECT_EQ(c.loops[u].center, cplx(0, 0));
        EXPECT_EQ(winding_number(c.loops[u]), 1);
    }
    EXPECT_LT(c.loops[0].radius, c.loops[1].radius);
    EXPECT_LT(c.loops[1].radius, c.loops[2].radius);
    EXPECT_GT(min_loop_distance(c.loops[0], c.loops[1]), 0.0);
    EXPECT_GT(min_loop_distance(c.loops[1], c.loops[2]), 0.0);
}

TEST(MultiLoop, NearOriginShrinksOrFails) {
    try {
        const auto c = build_multi_loop({0, 0.01}, 1, 1);
        EXPECT_LT(c.loops[0].radius, 0.01);
    } catch (const GeometryError&) {
        SUCCEED();
    }
}

TEST(MultiLoop, RejectsLowerHalfPlane) {
    EXPECT_THROW(build_multi_loop({1, -1}, 1, 1), GeometryError);
    EXPECT_THROW(build_multi_loop({0, 1}, 2, 3), GeometryError);
}

TEST(BaseArgs, ZeroLoopHasRealPositiveMinusT) {
    const auto c = assign_base_args(build_delta(1));
    EXPECT_NEAR(c.base.single[0][0], 0.0, 1e-12);
    EXPECT_NEAR(c.coordinate(0, c.base_params[0]).imag(), 0.0, 1e-12);
    EXPECT_LT(c.coordinate(0, c.base_params[0]).real(), 0.0);
}

TEST(BaseArgs, ZLoopHasRealPositiveZMinusT) {
    const cplx z{1, 2};
    const auto c = assign_base_args(build_multi_loop(z, 1, 1));
    EXPECT_NEAR(c.base.single[1][0], 0.0, 1e-12);
}

TEST(BaseArgs, MixedPairArgumentInUpperHalf) {
    const auto c = assign_base_args(build_multi_loop({1, 2}, 2, 1));
    EXPECT_GT(c.base.pair[0][1], 0.0);
    EXPECT_LT(c.base.pair[0][1], pi);
}

TEST(BaseArgs, TrackedStateMatchesPrincipalModulo2Pi) {
    const auto c = assign_base_args(build_multi_loop({1, 2}, 3, 2));
    const auto bs = origin_branch_state(c);
    for (int k = 0; k < bs.ncenters; ++k)
        for (int u = 0; u < bs.dim; ++u) {
            const double diff = bs.single[k][u].imag() - std::arg(bs.centers[k] - bs.t[u]);
            EXPECT_NEAR(std::remainder(diff, 2 * pi), 0.0, 1e-9);
        }
}

TEST(SteepestLoop, CDoublePrimeEnclosesZeroOnly) {
    const cplx z{1, 2};
    const auto s = build_steepest_loop(SteepestKind::CDoublePrime, z, 40);
    EXPECT_EQ(winding_number(s.path), 1);
    EXPECT_LT(s.path.radius, std::abs(z));
}

TEST(SteepestLoop, CPrimeEnclosesZeroAndZ) {
    const cplx z{1, 2};
    const auto s = build_steepest_loop(SteepestKind::CPrime, z, 40);
    EXPECT_GT(s.path.radius, std::abs(z));
    LoopPath shifted = s.path;
    double total = 0.0;
    cplx prev = s.path.point(0.0) - z;
    for (int i = 1; i <= 4000; ++i) {
        const cplx cur = shifted.point(i / 4000.0) - z;
        total += std::arg(cur / prev);
        prev = cur;
    }
    EXPECT_EQ(std::lround(total / (2 * pi)), 1);
}

TEST(SteepestLoop, TooShortTruncationFails) {
    EXPECT_THROW(build_steepest_loop(SteepestKind::CPrime, {1, 2}, 0.5), GeometryError);
}

TEST(ChangeVariables, ShiftsArgumentsByScaleArgument) {
    const cplx z{1, 2};
    const auto c = assign_base_args(build_multi_loop(z, 2, 1));
    const cplx scale{0.3, 0.8}, shift{0.5, -0.2};
    const auto d = change_variables(c, scale, shift, {shift, scale * z + shift});
    EXPECT_NEAR(d.base.pair[0][1] - c.base.pair[0][1], std::arg(scale), 1e-14);
    EXPECT_THROW(change_variables(c, scale, shift, {0.0, z}), GeometryError);
}
