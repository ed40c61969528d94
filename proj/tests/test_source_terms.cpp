/* SPDX-License-Identifier: Apache-2.0 */
#include <gtest/gtest.h>

#include <cmath>

#include "dclab/source_terms.hpp"

using namespace dclab;

TEST(SourceTerm, Evaluations)
{
    EXPECT_DOUBLE_EQ(SourceTerm::power(1, 1)(0.25), 0.25);
    EXPECT_DOUBLE_EQ(SourceTerm::exp_minus_one()(0.0), 0.0);
    EXPECT_NEAR(SourceTerm::log_one_plus_cube()(1.0), std::log(2.0), 1e-15);
    EXPECT_DOUBLE_EQ(SourceTerm::power(3, 0)(0.0), 0.0);
    EXPECT_DOUBLE_EQ(SourceTerm::power(3, 0).limit_at_zero(), 3.0);
    EXPECT_DOUBLE_EQ(SourceTerm::cubic(2)(0.5), 0.25);
    EXPECT_DOUBLE_EQ(SourceTerm::zero()(4.0), 0.0);
}

TEST(SourceTerm, NegativeArgumentIsDomainError)
{
    try {
        (void)SourceTerm::power(1, 1)(-1.0);
        FAIL() << "expected a throw";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Domain);
    }
}

TEST(SourceTerm, DescribeParsesBack)
{
    for (const char* text : {"power(1, 1)", "cubic(2)", "exp_minus_one", "log_one_plus_cube", "zero"}) {
        const SourceTerm f = parse_source(text);
        EXPECT_EQ(parse_source(f.describe()).describe(), f.describe()) << text;
    }
    const SourceTerm combo = parse_source("0.5*exp_minus_one + 2*power(1, 2)");
    EXPECT_EQ(combo.family(), SourceFamily::LinearCombination);
    EXPECT_NEAR(combo(1.0), 0.5 * (std::exp(1.0) - 1.0) + 2.0, 1e-14);
}

TEST(SourceTerm, ParseRejectsGarbage)
{
    EXPECT_THROW(parse_source("power(1"), Error);
    EXPECT_THROW(parse_source("nonsense"), Error);
    EXPECT_THROW(parse_source("power(-1, 1)"), Error);
}

TEST(SourceTerm, Antiderivative)
{
    EXPECT_NEAR(SourceTerm::power(1, 1).antiderivative(2.0), 2.0, 1e-12);
    EXPECT_NEAR(SourceTerm::exp_minus_one().antiderivative(1.0), std::exp(1.0) - 2.0, 1e-10);
}

TEST(CheckCondition, ExpMinusOneUpperGrowthGammaZero)
{
    const ConditionReport r = check_condition(SourceTerm::exp_minus_one(), Condition::UpperGrowth, 0.0, 1.0, 5.0, 200);
    EXPECT_LE(r.empirical, 1.0 + 1e-9);
    EXPECT_TRUE(r.pass);
}

TEST(CheckCondition, PowerIsExactlyHomogeneous)
{
    const SourceTerm f = SourceTerm::power(1, 1);
    const ConditionReport up = check_condition(f, Condition::UpperGrowth, 1.0, 1.0, 5.0, 200);
    const ConditionReport lo = check_condition(f, Condition::LowerGrowth, 1.0, 1.0, 5.0, 200);
    EXPECT_NEAR(up.empirical, 1.0, 1e-12);
    EXPECT_NEAR(lo.empirical, 1.0, 1e-12);
    EXPECT_TRUE(up.pass);
    EXPECT_TRUE(lo.pass);
}

TEST(CheckCondition, LogOnePlusCubeBorderlineConstantExceedsOne)
{
    const ConditionReport r = check_condition(SourceTerm::log_one_plus_cube(), Condition::Borderline, 3.0, 1.0, 2.0, 200);
    EXPECT_NEAR(r.empirical, 8.0 / std::log(9.0), 0.02);
    EXPECT_FALSE(r.pass);
}

TEST(CheckCondition, RejectsTooFewSamples)
{
    EXPECT_THROW(check_condition(SourceTerm::power(1, 1), Condition::UpperGrowth, 1.0, 1.0, 1.0, 10), Error);
}

TEST(CheckMonotone, MonotoneFamiliesPass)
{
    EXPECT_TRUE(check_monotone(SourceTerm::exp_minus_one(), 5.0, 200).pass);
    EXPECT_TRUE(check_monotone(SourceTerm::power(1, 2), 5.0, 200).pass);
    const SourceTerm combo =
        SourceTerm::linear_combination({{0.5, SourceTerm::power(1, 1)}, {2.0, SourceTerm::log_one_plus_square()}});
    EXPECT_TRUE(check_monotone(combo, 5.0, 200).pass);
}
