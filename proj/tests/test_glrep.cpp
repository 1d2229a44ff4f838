#include <gtest/gtest.h>

#include "hyperdual/glrep.hpp"
#include "hyperdual/ode.hpp"
#include "hyperdual/suite.hpp"

using namespace hyperdual;

namespace {

const WeightData kWd = validate_weight_data(2.3, 1, 1.3, 2, 2.5);

Vector apply(const ModuleSpec& s, int i, int j, const Vector& v) { return generator_matrix(i, j, s) * v; }

}  // namespace

TEST(ActE, HighestWeightAnnihilated) {
    const auto v = ModuleSpec::verma({1.7, 0.3}, 4);
    const auto t = act_E(1, 2, v, 0);
    EXPECT_EQ(t.c, cplx(0));
}

TEST(ActE, RaisingAfterLowering) {
    const cplx m{1.7, 0.3};
    const auto v = ModuleSpec::verma(m, 4);
    const auto down = act_E(2, 1, v, 0);
    const auto up = act_E(1, 2, v, down.d);
    EXPECT_EQ(up.d, 0);
    EXPECT_NEAR(std::abs(down.c * up.c - m), 0.0, 1e-15);
}

TEST(ActE, CommutatorRelation) {
    const auto v = ModuleSpec::verma({1.7, 0.3}, 5);
    // [E12, E21] = E11 - E22 holds away from the truncation edge
    const Matrix c = generator_matrix(1, 2, v) * generator_matrix(2, 1, v) - generator_matrix(2, 1, v) * generator_matrix(1, 2, v);
    const Matrix h = generator_matrix(1, 1, v) - generator_matrix(2, 2, v);
    EXPECT_LE((c - h).block(0, 0, 5, 5).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(ActE, IrreducibleTruncates) {
    const auto l1 = ModuleSpec::irrep(1, 4);
    EXPECT_EQ(l1.size(), 2);
    Vector top = Vector::Zero(2);
    top(0) = 1.0;
    EXPECT_LE(apply(l1, 2, 1, apply(l1, 2, 1, top)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(act_E(2, 1, l1, 1).c, cplx(0));
    EXPECT_THROW(ModuleSpec::irrep(-1, 3), NegativeDimension);
}

TEST(Casimir, EmptyWeightSpace) {
    const auto wd = validate_weight_data({1.3, 0.2}, 2, {3.3, 0.2}, 0, 2.5);
    const Matrix om = casimir_matrix(wd);
    ASSERT_EQ(om.rows(), 1);
    EXPECT_NEAR(std::abs(om(0, 0) - wd.m1 * 2.0), 0.0, 1e-14);
}

TEST(Casimir, Tridiagonal) {
    const auto wd = validate_weight_data({3.3, 0.4}, 3, {2.3, 0.4}, 4, 2.5);
    const Matrix om = casimir_matrix(wd);
    for (int a = 0; a < om.rows(); ++a)
        for (int b = 0; b < om.cols(); ++b)
            if (std::abs(a - b) > 1) {
                EXPECT_EQ(om(a, b), cplx(0));
            }
}

TEST(Casimir, MatchesOdeCoefficients) {
    for (const auto& wd : {kWd, validate_weight_data({3.3, 0.4}, 2, {2.3, 0.4}, 3, 2.5)}) {
        const auto cm = coefficient_matrices(wd);
        const WeightSpace ws(wd);
        const Matrix shifted = ws.casimir() - wd.m1 * double(wd.m2) * Matrix::Identity(ws.dim(), ws.dim());
        EXPECT_LE((shifted + cm.B).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LE((ws.slot(2, 2, 2) - cm.A).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Operators, ScalarCaseCoefficients) {
    const auto wd = validate_weight_data({1.3, 0.2}, 2, {3.3, 0.2}, 0, 2.5);
    const Point p = default_solution_point();
    const cplx m1m2 = wd.m1 * 2.0;
    const cplx kz1 = kz_operator(1, wd).coefficient(p)(0, 0);
    EXPECT_NEAR(std::abs(kz1 - (m1m2 / (p[0] - p[1]) + p[2] * wd.m1)), 0.0, 1e-13);
    const cplx d1 = dyn_operator(1, wd).coefficient(p)(0, 0);
    EXPECT_NEAR(std::abs(d1 - (p[0] * wd.m1 + p[1] * 2.0)), 0.0, 1e-13);
}

TEST(Operators, InverseDifferencePartsCancel) {
    const Point p = default_solution_point();
    const WeightSpace ws(kWd);
    const Matrix sum = kz_operator(1, kWd).coefficient(p) + kz_operator(2, kWd).coefficient(p);
    const Matrix linear = p[2] * (ws.slot(1, 1, 1) + ws.slot(2, 1, 1)) + p[3] * (ws.slot(1, 2, 2) + ws.slot(2, 2, 2));
    EXPECT_LE((sum - linear).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Operators, DynamicalStructure) {
    const auto wd = validate_weight_data({3.3, 0.4}, 3, {2.3, 0.4}, 4, 2.5);
    const Matrix d = WeightSpace(wd).dynamical_term();
    for (int a = 0; a < d.rows(); ++a)
        for (int b = 0; b < d.cols(); ++b)
            if (std::abs(a - b) > 1) {
                EXPECT_EQ(d(a, b), cplx(0));
            }
}

TEST(Compatibility, ScalarCase) {
    const auto wd = validate_weight_data({1.3, 0.2}, 2, {3.3, 0.2}, 0, 2.5);
    const auto rep = compatibility_check(default_solution_point(), wd);
    EXPECT_LE(rep.max_rel_err, 1e-14);
}

TEST(Compatibility, RandomPoints) {
    for (const auto& wd : {kWd, validate_weight_data({2.3, 0.4}, 2, {2.3, 0.4}, 2, 2.5)})
        for (const auto& p : random_points(20, 7)) EXPECT_TRUE(compatibility_check(p, wd).pass);
}

TEST(Intertwining, DegenerateSquare) {
    const auto wd = validate_weight_data({1.3, 0.2}, 0, {1.3, 0.2}, 0, 2.5);
    EXPECT_TRUE(duality_intertwine_check(default_solution_point(), wd).pass);
}

TEST(Intertwining, RandomPoints) {
    for (const auto& wd : {kWd, validate_weight_data({3.3, 0.4}, 2, {2.3, 0.4}, 3, 2.5)})
        for (const auto& p : random_points(10, 3)) EXPECT_TRUE(duality_intertwine_check(p, wd).pass);
}

TEST(Residual, ZeroFieldHasZeroResidual) {
    const VectorField zero = [](const Point&) { return Vector::Zero(2).eval(); };
    const auto rep = solution_residual_check(zero, default_solution_point(), 1e-2, kWd);
    EXPECT_EQ(rep.max_rel_err, 0.0);
}

TEST(Residual, CoincidentPointRejected) {
    Point p = default_solution_point();
    p[1] = p[0];
    EXPECT_THROW(compatibility_check(p, kWd), DegenerateParameters);
}
