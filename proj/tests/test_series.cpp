#include <random>

#include <gtest/gtest.h>

#include "cactus/series.hpp"

using namespace cactus;

namespace {

PowerSeries random_series(std::mt19937& gen, std::size_t order, bool fractional) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    PowerSeries a(order);
    for (std::size_t i = 0; i <= order; ++i) {
        a[i] = Coefficient(num(gen), fractional ? den(gen) : 1);
        a[i].canonicalize();
    }
    return a;
}

PowerSeries naive_product(const PowerSeries& a, const PowerSeries& b) {
    PowerSeries c(a.order());
    for (std::size_t i = 0; i <= a.order(); ++i)
        for (std::size_t j = 0; i + j <= a.order(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

}  // namespace

TEST(Series, AddSubtractScale) {
    PowerSeries a(3, {1, 2, 3}), b(3, {0, 1, 0, 4});
    EXPECT_EQ(add(a, b), PowerSeries(3, {1, 3, 3, 4}));
    EXPECT_EQ(sub(a, b), PowerSeries(3, {1, 1, 3, -4}));
    EXPECT_EQ(scale(a, Coefficient(1, 2)), PowerSeries(3, {Coefficient(1, 2), 1, Coefficient(3, 2)}));
}

TEST(Series, OrderMismatchIsAnError) {
    PowerSeries a(3), b(4);
    EXPECT_THROW(add(a, b), OrderMismatch);
    EXPECT_THROW(mul(a, b), OrderMismatch);
}

TEST(Series, ProductMatchesNaiveConvolution) {
    std::mt19937 gen(11);
    for (int trial = 0; trial < 30; ++trial) {
        const bool fractional = trial % 2 == 1;
        auto a = random_series(gen, 12, fractional), b = random_series(gen, 12, fractional);
        EXPECT_EQ(mul(a, b), naive_product(a, b));
    }
}

TEST(Series, PowerIsRepeatedProduct) {
    std::mt19937 gen(5);
    for (std::size_t m = 0; m <= 6; ++m) {
        auto a = random_series(gen, 10, m % 2 == 0);
        PowerSeries expected = PowerSeries::one(10);
        for (std::size_t i = 0; i < m; ++i) expected = naive_product(expected, a);
        EXPECT_EQ(pow(a, m), expected) << "m=" << m;
    }
}

TEST(Series, SubstitutePowerSpreadsCoefficients) {
    PowerSeries a(7, {0, 1, 2, 3});
    PowerSeries expected(7);
    expected[2] = 1;
    expected[4] = 2;
    expected[6] = 3;
    EXPECT_EQ(substitute_power(a, 2), expected);
    EXPECT_EQ(substitute_power(a, 1), a);
}

TEST(Series, ValuationAndIntegrality) {
    PowerSeries a(5, {0, 0, Coefficient(1, 2)});
    EXPECT_EQ(a.valuation(), 2u);
    EXPECT_FALSE(a.all_integral());
    EXPECT_TRUE(PowerSeries::zero(4).is_zero());
    EXPECT_FALSE(PowerSeries::zero(4).valuation().has_value());
    EXPECT_EQ(PowerSeries::monomial(4, 3, 7)[3], 7);
}
