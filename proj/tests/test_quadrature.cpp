#include <gtest/gtest.h>

#include "hyperdual/quadrature.hpp"
#include "hyperdual/selberg.hpp"

using namespace hyperdual;

namespace {

QuadratureConfig loose() {
    QuadratureConfig q;
    q.levels = 1;
    q.strict = false;
    return q;
}

}  // namespace

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    const GaussLegendre gl(6);
    double s0 = 0, s10 = 0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
        s0 += gl.w[i];
        s10 += gl.w[i] * std::pow(gl.x[i], 10);
    }
    EXPECT_NEAR(s0, 2.0, 1e-14);
    EXPECT_NEAR(s10, 2.0 / 11.0, 1e-14);
}

TEST(Quadrature, ConstantOverClosedLoopVanishes) {
    QuadratureConfig q = loose();
    q.truncation = 30.0;
    const auto c = assign_base_args(build_delta(1));
    const auto r = integrate_multiloop_scalar(c, q, [](const GridPoint&) { return cplx(1.0); });
    EXPECT_NEAR(std::abs(r.value), 0.0, 1e-10);
}

TEST(Quadrature, ResidueFixesOrientation) {
    const auto c = assign_base_args(build_delta(1));
    QuadratureConfig q = loose();
    q.nodes = 12;
    q.truncation = 40.0;
    // e^{-t}/(-t) decays along the rays, so the truncated loop sees only the residue
    const auto r = integrate_multiloop_scalar(c, q, [](const GridPoint& p) { return std::exp(-p.s[0]) / (-p.s[0]); });
    EXPECT_NEAR(std::abs(r.value - cplx(0, -2 * pi)), 0.0, 1e-10);
}

TEST(Quadrature, GenericAndProductPathsAgree) {
    const SelbergParams p{2, {0.7, 0.0}, 2.5};
    const auto c = assign_base_args(build_delta(2));
    QuadratureConfig q = loose();
    q.truncation = 60.0;
    const auto fast = integrate_product(c, q, selberg_integrand(p)).component(0);
    const auto slow = integrate_multiloop_scalar(c, q, [&](const GridPoint& g) {
        cplx lg{};
        for (int u = 0; u < 2; ++u) lg += -g.s[u] / p.kappa - (1.0 + p.m / p.kappa) * g.branch.single[0][u];
        lg += 2.0 / p.kappa * g.branch.pair[0][1];
        return std::exp(lg);
    });
    EXPECT_NEAR(std::abs(fast.value - slow.value), 0.0, 1e-11 * std::abs(fast.value));
}

TEST(Quadrature, OneDimensionalSelbergIntegrand) {
    const SelbergParams p{1, {0.7, 0.0}, 2.5};
    QuadratureConfig q;
    q.nodes = 10;
    q.levels = 2;
    q.strict = false;
    const auto r = selberg_numeric(p, q);
    EXPECT_LE(std::abs(r.value / selberg_closed(p) - 1.0), 1e-8);
    EXPECT_LE(r.error, 1e-6);
}

TEST(Quadrature, StrictModeReportsNoConvergence) {
    const SelbergParams p{2, {0.7, 0.0}, 2.5};
    QuadratureConfig q;
    q.nodes = 4;
    q.levels = 1;
    q.target_rel_err = 1e-12;
    q.strict = true;
    EXPECT_THROW(selberg_numeric(p, q), NoConvergence);
}

TEST(Quadrature, ConfigValidation) {
    QuadratureConfig q;
    q.nodes = 2;
    EXPECT_THROW(q.validate(), ConfigError);
    q = {};
    q.truncation = -1.0;
    EXPECT_THROW(q.validate(), ConfigError);
}

TEST(Quadrature, IndependentOfWorkerCount) {
    const SelbergParams p{2, {1.4, 0.3}, 3.7};
    setenv("HYPERDUAL_THREADS", "1", 1);
    const auto one = selberg_numeric(p, loose());
    setenv("HYPERDUAL_THREADS", "3", 1);
    const auto three = selberg_numeric(p, loose());
    unsetenv("HYPERDUAL_THREADS");
    EXPECT_EQ(one.value, three.value);
    EXPECT_EQ(one.error, three.error);
}
