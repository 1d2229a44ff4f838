#include <gtest/gtest.h>

#include "hyperdual/asympt.hpp"
#include "hyperdual/checks.hpp"
#include "hyperdual/suite.hpp"

using namespace hyperdual;

namespace {

QuadratureConfig desk() { return acceptance_setup().quad; }

}  // namespace

TEST(SteepestNumeric, EntireIntegrandVanishes) {
    const SaddleParams p{{1, 2}, 0.0, 0.0, SteepestKind::CDoublePrime};
    EXPECT_NEAR(std::abs(steepest_numeric(p, desk()).value), 0.0, 1e-12);
}

TEST(SteepestNumeric, SimplePoleResidue) {
    const SaddleParams p{{1, 2}, 0.0, -1.0, SteepestKind::CDoublePrime};
    EXPECT_NEAR(std::abs(steepest_numeric(p, desk()).value - cplx(0, -2 * pi)), 0.0, 1e-10);
}

TEST(SteepestAsympt, CPrimeReduction) {
    const cplx z{1, 2};
    const double M = 100;
    const SaddleParams p{z, M, 0.0, SteepestKind::CPrime};
    const cplx root = std::sqrt(-z * M);
    const cplx positive = cplx(0, std::sqrt(pi)) * std::pow(-z * M, 0.25) * std::exp(2.0 * root - z / 2.0);
    EXPECT_NEAR(std::abs(steepest_asympt(p, true) / positive - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(steepest_asympt(p) / positive + 1.0), 0.0, 1e-12);
}

TEST(SteepestAsympt, IntegerExponentKillsCDoublePrime) {
    const SaddleParams p{{1, 2}, 100.0, 2.0, SteepestKind::CDoublePrime};
    // compare against the same term with a generic exponent, where the phase factor has modulus sqrt(2)
    const SaddleParams generic{{1, 2}, 100.0, 2.25, SteepestKind::CDoublePrime};
    EXPECT_LT(std::abs(steepest_asympt(p)), 1e-10 * std::abs(steepest_asympt(generic)));
}

TEST(SteepestNumeric, CPrimeCloseToLeadingTerm) {
    const SaddleParams p{{1, 2}, 100.0, 0.0, SteepestKind::CPrime};
    const cplx ratio = steepest_numeric(p, desk()).value / steepest_asympt(p);
    EXPECT_LT(std::abs(ratio - 1.0), 3.0 / std::sqrt(p.M));
}

TEST(SteepestNumeric, DeviationShrinksWithM) {
    EXPECT_TRUE(saddle_check({1, 2}, 0.0, SteepestKind::CPrime, {100, 400}, desk()).pass);
    EXPECT_TRUE(saddle_check({1, 2}, 0.25, SteepestKind::CDoublePrime, {100, 400}, desk()).pass);
}

TEST(SteepestNumeric, RejectsLowerHalfPlane) {
    EXPECT_THROW(steepest_numeric({{1, -2}, 100.0, 0.0, SteepestKind::CPrime}), ConfigError);
}

TEST(DimensionScan, DualSideStaysOneDimensional) {
    DimensionScanConfig cfg;
    cfg.l2_values = {2, 20};
    const auto rows = dimension_scan(cfg, acceptance_setup());
    ASSERT_EQ(rows.size(), 8u);
    for (const auto& r : rows) {
        EXPECT_LE(r.a, 1);
        EXPECT_TRUE(std::isfinite(std::abs(r.dual)));
    }
    for (const auto& r : rows) {
        if (r.l2 == 2) {
            ASSERT_TRUE(r.direct.has_value());
            EXPECT_LE(r.err, 1e-5) << "a=" << r.a << " b=" << r.b;
        }
        if (r.a == 0 && r.b == 0) {
            ASSERT_TRUE(r.saddle_numeric.has_value());
            EXPECT_LE(relative_gap(*r.saddle_numeric, r.dual), 1e-6) << "l2=" << r.l2;
        }
    }
}

TEST(DimensionScan, CsvLayout) {
    DimensionScanConfig cfg;
    cfg.l2_values = {1};
    std::ostringstream os;
    write_dimension_csv(os, dimension_scan(cfg, acceptance_setup()));
    std::istringstream in(os.str());
    std::string header, line;
    std::getline(in, header);
    EXPECT_EQ(header.rfind("l2,l1,a,b,", 0), 0u);
    int rows = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), std::count(header.begin(), header.end(), ','));
        ++rows;
    }
    EXPECT_EQ(rows, 4);
}
