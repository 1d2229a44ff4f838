#include <gtest/gtest.h>

#include "hyperdual/checks.hpp"
#include "hyperdual/ode.hpp"
#include "hyperdual/suite.hpp"

using namespace hyperdual;

namespace {

const WeightData kWd = validate_weight_data(2.3, 1, 1.3, 2, 2.5);

}  // namespace

TEST(Coefficients, MinimalDimension) {
    const auto cm = coefficient_matrices(kWd);
    ASSERT_EQ(cm.A.rows(), 2);
    EXPECT_EQ(cm.A(0, 0), cplx(0));
    EXPECT_EQ(cm.A(1, 1), cplx(1));
    EXPECT_EQ(cm.A(0, 1), cplx(0));
    EXPECT_EQ(cm.B(0, 0), cplx(2));
    EXPECT_EQ(cm.B(0, 1), cplx(-2));
}

TEST(Coefficients, SwapSymmetry) {
    for (const auto& wd : {kWd, validate_weight_data({3.3, 0.4}, 2, {2.3, 0.4}, 3, 2.5)}) {
        const auto a = coefficient_matrices(wd), b = coefficient_matrices(wd.swapped());
        EXPECT_LE((a.B - b.B).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_LE((a.A - b.A).cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(Coefficients, MatchCasimirAndSecondSlot) {
    const auto wd = validate_weight_data({3.3, 0.4}, 2, {2.3, 0.4}, 3, 2.5);
    const auto cm = coefficient_matrices(wd);
    const PsiSystem sys(wd);
    EXPECT_LE((sys.omega_shifted + cm.B).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((sys.e22_second - cm.A).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(OdeResidual, EmptyDimension) {
    const auto wd = validate_weight_data(1.3, 1, 2.3, 0, 2.5);
    const auto rep = ode_residual({1, 2}, wd, {1e-2});
    EXPECT_EQ(rep.max_rel_err, 0.0);
}

TEST(OdeResidual, OneByTwo) {
    const auto rep = ode_residual({1, 2}, kWd, {1e-3}, acceptance_setup(12));
    EXPECT_LE(rep.max_rel_err, 1e-5);
}

TEST(OdeResidual, SwappedDataSameEquation) {
    const auto rep = ode_residual({1, 2}, kWd.swapped(), {1e-3}, acceptance_setup(12));
    EXPECT_LE(rep.max_rel_err, 1e-5);
}

TEST(Asymptotics, Reductions) {
    const cplx z{0, 40};
    EXPECT_EQ(asympt_leading(1, 0, z, kWd), cplx(0));
    const cplx expect = std::exp(2.0 / kWd.kappa * std::log(kWd.kappa / z));
    EXPECT_NEAR(std::abs(asympt_leading(0, 0, z, kWd) - expect), 0.0, 1e-14);
}

TEST(Asymptotics, ErrorShrinksLikeInverseZ) {
    const auto rep = asympt_check(kWd, {cplx(0, 50), cplx(0, 100)}, acceptance_setup());
    EXPECT_TRUE(rep.pass) << rep.max_rel_err;
}

TEST(SolvePsi, ConstantPathKeepsInitialValue) {
    Vector psi0(2);
    psi0 << cplx(1, 2), cplx(-0.5, 0.3);
    const auto out = solve_psi({cplx(1, 1), cplx(1, 1)}, psi0, kWd);
    EXPECT_EQ(out, psi0);
}

TEST(SolvePsi, ScalarSystemClosedForm) {
    const auto wd = validate_weight_data({1.3, 0.2}, 1, {2.3, 0.2}, 0, 2.5);
    const PsiSystem sys(wd);
    Vector psi0(1);
    psi0 << cplx(0.4, -0.1);
    const cplx x0{1, 1}, x1{-0.5, 2};
    const auto out = solve_psi({x0, cplx(0.3, 1.8), x1}, psi0, wd);
    const cplx w = sys.omega_shifted(0, 0), e = sys.e22_second(0, 0);
    const cplx expect = psi0(0) * std::exp((w * (std::log(x1) - std::log(x0)) - e * (x1 - x0)) / wd.kappa);
    EXPECT_NEAR(std::abs(out(0) - expect), 0.0, 1e-10);
}

TEST(SolvePsi, PathThroughOriginRejected) {
    Vector psi0 = Vector::Ones(2);
    EXPECT_THROW(solve_psi({cplx(-1, 0), cplx(1, 0)}, psi0, kWd), SingularPath);
}

TEST(SolvePsi, TransportReproducesQuadrature) {
    const cplx x0{2, 3}, x1{1, 2};
    for (int b = 0; b <= 1; ++b) {
        const Vector start = ibar(b, x0, kWd, acceptance_setup(12));
        const Vector end = ibar(b, x1, kWd, acceptance_setup(12));
        const Vector moved = solve_psi({x0, x1}, start, kWd);
        EXPECT_LE((moved - end).cwiseAbs().maxCoeff() / end.cwiseAbs().maxCoeff(), 1e-5);
    }
}

TEST(Prefactor, PureExponentialWhenPowersVanish) {
    const auto wd = validate_weight_data({1.3, 0.2}, 0, {1.3, 0.2}, 0, 2.5);
    const Point p = default_solution_point();
    const cplx expect = p[0] * p[2] * wd.m1 / wd.kappa;
    EXPECT_NEAR(std::abs(log_solution_prefactor(p, wd) - expect), 0.0, 1e-14);
}

TEST(SolutionCheck, IntegralAndTransportRoutes) {
    const auto rep = solution_check(kWd, default_solution_point(), 1e-2, acceptance_setup(12));
    EXPECT_LE(rep.max_rel_err, 1e-5);
}
