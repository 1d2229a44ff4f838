#include <gtest/gtest.h>

#include "hyperdual/model.hpp"

using namespace hyperdual;

TEST(WeightData, AcceptsBalancedTuple) {
    const auto wd = validate_weight_data({2.3, 0}, 1, {1.3, 0}, 2, 2.5);
    EXPECT_EQ(wd.m2, 1);
    EXPECT_EQ(wd.l2, 2);
    EXPECT_EQ(wd.dim(), 1);
    EXPECT_DOUBLE_EQ(wd.kappa, 2.5);
}

TEST(WeightData, RejectsUnbalancedTuple) {
    EXPECT_THROW(validate_weight_data(1.0, 1, 1.0, 2, 2.5), BalanceViolation);
}

TEST(WeightData, RejectsResonantKappa) {
    EXPECT_THROW(validate_weight_data(2.3, 1, 1.3, 2, 1.0), NonGenericKappa);
    EXPECT_THROW(validate_weight_data(2.3, 1, 1.3, 2, -1.0), NonGenericKappa);
}

TEST(WeightData, RejectsNegativeDimension) {
    EXPECT_THROW(validate_weight_data(2.3, -1, 1.3, 0, 2.5), NegativeDimension);
}

TEST(WeightData, SwapExchangesPairs) {
    const auto wd = validate_weight_data({2.3, 0.1}, 1, {1.3, 0.1}, 2, 2.5).swapped();
    EXPECT_EQ(wd.m1, cplx(1.3, 0.1));
    EXPECT_EQ(wd.m2, 2);
    EXPECT_EQ(wd.l1, cplx(2.3, 0.1));
    EXPECT_EQ(wd.l2, 1);
}

TEST(AdmissibleRange, MinOfDimensions) {
    EXPECT_EQ(admissible_range(1, 2), 1);
    EXPECT_EQ(admissible_range(0, 5), 0);
    EXPECT_EQ(admissible_range(3, 3), 3);
    EXPECT_THROW(admissible_range(-1, 2), NegativeDimension);
}

TEST(AdmissibleIndex, BoundsChecked) {
    EXPECT_EQ(AdmissibleIndex::make(1, 2, 3).a, 1);
    EXPECT_THROW(AdmissibleIndex::make(3, 2, 3), IndexOutOfRange);
    EXPECT_THROW(AdmissibleIndex::make(-1, 2, 3), IndexOutOfRange);
}

TEST(CheckReport, NanCountsAsFailure) {
    CheckReport r;
    r.tolerance = 1e-5;
    r.update(1e-7);
    EXPECT_TRUE(r.pass);
    r.update(std::nan(""));
    EXPECT_FALSE(r.pass);
}
