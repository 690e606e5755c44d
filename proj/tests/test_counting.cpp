#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "polya/counting.hpp"
#include "polya/triangle.hpp"

using namespace polya;

namespace {

constexpr auto D = BoundaryCondition::Dirichlet;
constexpr auto N = BoundaryCondition::Neumann;

}  // namespace

TEST(Count, StrictInequality) {
    const auto s = sphere2_spectrum(100);
    EXPECT_EQ(count(s, 0), 0u);
    EXPECT_EQ(count(s, 1e-12), 1u);
    EXPECT_EQ(count(s, 2), 1u);
    EXPECT_EQ(count(s, 2.0000001), 4u);
    EXPECT_THROW(count(s, 101), RangeError);
}

TEST(Count, SquareSideTenNeumannAtOne) {
    // 0, 1, 2, 4, 5, 8, 9, 10 (times pi^2/100) lie below 1.
    const auto s = box_spectrum(std::vector<PiRational>{PiRational(10), PiRational(10)}, N, 2);
    const CountingFunction cf(s, box_meta(std::vector<PiRational>{PiRational(10), PiRational(10)}, N));
    EXPECT_EQ(cf(1), 13u);
    EXPECT_EQ(cf(1), oracle::count_below(oracle::box_values({10, 10}, false, 2), 1));
}

TEST(Count, ClosedFormCountingFunction) {
    const CountingFunction tri("triangle", triangle_neumann_counting, triangle_meta());
    EXPECT_EQ(tri(1), 1u);
    EXPECT_EQ(tri(16 * kPi * kPi / 9 + 1e-9), 3u);
    EXPECT_TRUE(std::isinf(tri.coverage()));
    EXPECT_THROW((void)tri.require_stream("x"), ConfigError);
}

TEST(Count, StreamLookupMatchesLinearScan) {
    const auto s = box_spectrum(std::vector<double>{1.0, 1.3, 0.7}, N, 3000);
    const CountingFunction cf(s, box_meta(std::vector<double>{1.0, 1.3, 0.7}, N));
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> lam(0, 3000);
    for (int i = 0; i < 500; ++i) {
        const double l = lam(rng);
        EXPECT_EQ(cf(l), count(s, l));
    }
    for (const auto& e : s.entries()) EXPECT_EQ(cf(e.value), count(s, e.value));
}

TEST(Count, MonotoneAndRightContinuousJumps) {
    const auto s = sphere2_spectrum(2000);
    for (const auto& j : jump_points(s)) {
        EXPECT_EQ(count(s, j.lambda), j.below);
        EXPECT_EQ(count(s, std::nextafter(j.lambda, 1e9)), j.above);
        EXPECT_LT(j.below, j.above);
    }
}

TEST(ProductCount, RandomInstancesMatchPairwiseOracle) {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> side(0.4, 3.0);
    for (int inst = 0; inst < 15; ++inst) {
        const double cutoff = 400;
        const auto b1 = std::vector<double>{side(rng)};
        const auto b2 = std::vector<double>{side(rng), side(rng)};
        const bool dir = inst % 2 == 0;
        const auto s1 = box_spectrum(b1, dir ? D : N, cutoff);
        const auto s2 = box_spectrum(b2, dir ? D : N, cutoff);
        const CountingFunction cf2(s2, box_meta(b2, dir ? D : N));
        const auto v1 = oracle::box_values(b1, dir, cutoff);
        const auto v2 = oracle::box_values(b2, dir, cutoff);
        std::uniform_real_distribution<double> lam(0, cutoff);
        for (int i = 0; i < 100; ++i) {
            const double l = lam(rng);
            ASSERT_EQ(product_count(s1, cf2, l), oracle::pairwise_count(v1, v2, l)) << inst << ' ' << l;
        }
    }
}

TEST(ProductCount, RangeChecked) {
    const auto s = sphere2_spectrum(10);
    const CountingFunction cf(sphere2_spectrum(5), sphere2_meta());
    EXPECT_THROW(product_count(s, cf, 11), RangeError);
    EXPECT_THROW(product_count(s, cf, 9), RangeError);
}

TEST(Weyl, LeadingTermAndTwoTerm) {
    const auto m = box_meta(std::vector<double>{1.0, 1.0}, D);
    EXPECT_NEAR(weyl_leading(m, 4 * kPi), 1.0, 1e-14);
    EXPECT_NEAR(two_term_bound(m, 2, 4, BoundSide::Upper), 4 / (4 * kPi) + 2 * 2, 1e-14);
    EXPECT_NEAR(two_term_bound(m, 2, 4, BoundSide::Lower), 4 / (4 * kPi) - 2 * 2, 1e-14);
    EXPECT_THROW(two_term_bound(m, 0, 4, BoundSide::Upper), DomainError);
    EXPECT_THROW(weyl_leading(m, -1), DomainError);
}

TEST(Weyl, SphereAsymptoticRatio) {
    const auto s = sphere2_spectrum(1e6 + 1);
    const CountingFunction cf(s, sphere2_meta());
    EXPECT_NEAR(static_cast<double>(cf(1e6)) / weyl_leading(sphere2_meta(), 1e6), 1.0, 2e-3);
}

TEST(BoundCheckPoints, UpperAndLower) {
    const auto s = sphere2_spectrum(30);  // 0, 2, 6, 12, 20
    const auto up = bound_check_points(s, 1, 20, BoundSide::Upper);
    ASSERT_EQ(up.size(), 5u);
    EXPECT_EQ(up[0], (std::pair<double, std::uint64_t>{1, 1}));
    EXPECT_EQ(up[1], (std::pair<double, std::uint64_t>{2, 4}));
    EXPECT_EQ(up[4], (std::pair<double, std::uint64_t>{20, 25}));
    const auto low = bound_check_points(s, 1, 21, BoundSide::Lower);
    ASSERT_EQ(low.size(), 5u);
    EXPECT_EQ(low[0], (std::pair<double, std::uint64_t>{2, 1}));
    EXPECT_EQ(low[3], (std::pair<double, std::uint64_t>{20, 16}));
    EXPECT_EQ(low[4], (std::pair<double, std::uint64_t>{21, 25}));
    EXPECT_THROW(bound_check_points(s, 1, 31, BoundSide::Upper), RangeError);
}

// A monotone bound that the step function violates somewhere in the window is
// violated at one of the check points; compare against a dense sweep.
TEST(BoundCheckPoints, DenseSweepAgrees) {
    const auto s = box_spectrum(std::vector<double>{1.0, 2.0}, N, 2000);
    const CountingFunction cf(s, box_meta(std::vector<double>{1.0, 2.0}, N));
    for (double c : {0.5, 1.0, 2.0, 4.0}) {
        auto bound = [&](double l) { return 2 * l / (4 * kPi) + c * std::sqrt(l); };
        bool scan_ok = true;
        for (const auto& r : scan_counting_bound(s, bound, 0.1, 2000, BoundSide::Upper)) scan_ok &= r.margin >= 0;
        bool dense_ok = true;
        for (double l = 0.1; l <= 2000; l += 0.01) dense_ok &= cf(std::nextafter(l, 1e9)) <= bound(l);
        EXPECT_EQ(scan_ok, dense_ok) << c;
    }
}

TEST(Seeley, SquareTenNeumannBelowTwenty) {
    const std::vector<PiRational> sides{PiRational(10), PiRational(10)};
    const CountingFunction cf(box_spectrum(sides, N, 1e4), box_meta(sides, N));
    const auto est = estimate_seeley_constant(cf, 1e4, BoundSide::Upper);
    EXPECT_GT(est.value, 0);
    EXPECT_LT(est.value, 20);
    EXPECT_EQ(est.top.size(), 5u);
    EXPECT_EQ(est.argmax, est.top.front().first);
    for (std::size_t i = 1; i < est.top.size(); ++i) EXPECT_GE(est.top[i - 1].second, est.top[i].second);
}

TEST(Seeley, ConstantMakesBoundHold) {
    const auto meta = sphere2_meta();
    const CountingFunction cf(sphere2_spectrum(5000), meta);
    const auto est = estimate_seeley_constant(cf, 5000, BoundSide::Lower);
    const double c = est.value * (1 + 1e-12) + 1e-12;
    auto bound = [&](double l) { return two_term_bound(meta, c, l, BoundSide::Lower); };
    for (const auto& r : scan_counting_bound(*cf.stream(), bound, est.window_lo, 5000, BoundSide::Lower))
        EXPECT_GE(r.margin, -1e-9) << r.lambda;
}

TEST(Seeley, UndefinedWithoutPositiveEigenvalues) {
    const CountingFunction cf(EigenvalueStream(std::vector<SpectralEntry>{{0, 1}}, 1), sphere2_meta());
    EXPECT_THROW(estimate_seeley_constant(cf, 1, BoundSide::Upper), UndefinedEstimateError);
}
