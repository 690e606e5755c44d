#include <gtest/gtest.h>

#include <numbers>

#include "polya/error.hpp"
#include "polya/exact.hpp"

using polya::BigRational;
using polya::parse_pi_rational;
using polya::PiRational;

TEST(PiRational, ParsesSymbolicLengths) {
    EXPECT_EQ(parse_pi_rational("pi/24"), PiRational(BigRational(1, 24), 1));
    EXPECT_EQ(parse_pi_rational("1/4pi"), PiRational(BigRational(1, 4), -1));
    EXPECT_EQ(parse_pi_rational("3pi/2"), PiRational(BigRational(3, 2), 1));
    EXPECT_EQ(parse_pi_rational("2*pi"), PiRational(BigRational(2), 1));
    EXPECT_EQ(parse_pi_rational(" 10 "), PiRational(10));
    EXPECT_EQ(parse_pi_rational("0.25"), PiRational(BigRational(1, 4), 0));
    EXPECT_EQ(parse_pi_rational("PI"), PiRational::pi());
}

TEST(PiRational, RejectsGarbage) {
    for (const char* bad : {"", "abc", "1/0", "pi/", "/2", "1//2", "1/2/3", "2x"})
        EXPECT_THROW(parse_pi_rational(bad), polya::ConfigError) << bad;
}

TEST(PiRational, ThinIntervalUnitIsRational) {
    const auto a = parse_pi_rational("pi/24");
    const auto unit = PiRational::pi().pow(2) / a.pow(2);
    EXPECT_TRUE(unit.is_rational());
    EXPECT_EQ(unit, PiRational(576));
    EXPECT_DOUBLE_EQ(a.to_double(), std::numbers::pi / 24);
}

TEST(PiRational, RationalGcd) {
    EXPECT_EQ(polya::rational_gcd(BigRational(576), BigRational(1)), BigRational(1));
    EXPECT_EQ(polya::rational_gcd(BigRational(1, 4), BigRational(1, 6)), BigRational(1, 12));
    EXPECT_EQ(polya::rational_gcd(BigRational(6), BigRational(4)), BigRational(2));
}
