#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "greens/sign_region.hpp"
#include "oracles.hpp"

using namespace greens;
using std::numbers::pi;

namespace {

/// Brute-force extrema on a fine full-square grid.
std::pair<double, double> brute_min_max(const CompositeKernel& k, int n) {
    const double T = k.T();
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = -T + 2 * T * i / (n - 1);
    const auto H = k.eval_grid(g, g);
    return {H.minCoeff(), H.maxCoeff()};
}

}  // namespace

TEST(Candidates, Structure) {
    const auto diag = extremum_candidates(1.0, 0.8, ExtremumKind::MinOfPositive);
    for (const auto& [t, s] : diag) EXPECT_DOUBLE_EQ(t, s);
    const auto neg = extremum_candidates(1.0, 0.8, ExtremumKind::MaxOfNegative);
    EXPECT_NE(std::find(neg.begin(), neg.end(), Point2{0.8, 0.0}), neg.end());
    const auto mneg = extremum_candidates(-2.0, 0.8, ExtremumKind::MaxOfNegative);
    for (Point2 p : {Point2{0.0, 0.0}, Point2{0.75 * 0.8, 0.75 * 0.8}, Point2{0.8, 0.0}, Point2{0.5 * 0.8, -0.5 * 0.8}})
        EXPECT_NE(std::find(mneg.begin(), mneg.end(), p), mneg.end());
}

TEST(MinMaxH, PositiveKernel) {
    const auto k = make_kernel(1.0, 0.0, 1.0);
    const auto mm = min_max_H(k);
    EXPECT_GT(mm.min, 0.0);
    EXPECT_NEAR(k.eval(mm.argmin.first, mm.argmin.second), k.eval(-mm.argmin.first, -mm.argmin.second), 1e-14);
}

TEST(MinMaxH, VanishesAtP) {
    const double T = 0.7;
    const auto k = make_kernel(std::pow(pi / (2 * T), 2), 0.0, T);
    const auto mm = min_max_H(k);
    EXPECT_NEAR(mm.min, 0.0, 1e-10);
}

TEST(MinMaxH, NotWorseThanBruteForce) {
    for (auto [m, M, T] : {std::tuple{1.0, 0.7, 0.8}, std::tuple{-3.0, 4.5, 0.8}, std::tuple{0.4, 0.3, 1.6},
                           std::tuple{-8.0, 14.0, 0.5}, std::tuple{0.0, 0.5, 2.3}}) {
        const auto k = make_kernel(m, M, T);
        const auto mm = min_max_H(k);
        const auto [lo, hi] = brute_min_max(k, 301);
        EXPECT_LE(mm.min, lo + 1e-12) << m << " " << M;
        EXPECT_GE(mm.max, hi - 1e-12) << m << " " << M;
    }
}

TEST(MinMaxH, RejectsCoarseGrid) { EXPECT_THROW(min_max_H(make_kernel(1.0, 0.0, 1.0), 20), DomainError); }

TEST(CriticalM, MZeroHalf) {
    const double pos = critical_M_bisect(0.0, 0.5, RegionSign::Positive, {0.1, 20.0});
    EXPECT_NEAR(pos, 8.0, 1e-3);
    const double neg = critical_M_bisect(0.0, 0.5, RegionSign::Negative);
    EXPECT_NEAR(neg, -8.0, 1e-3);
}

TEST(CriticalM, MatchesClosedFormPositiveM) {
    for (double m : {0.5, 1.0, 1.5}) {
        const double b = critical_M_bisect(m, 0.8, RegionSign::Positive);
        EXPECT_NEAR(b, region_boundary_closed_Tle1(m, 0.8, RegionSign::Positive), 1e-3) << m;
        EXPECT_NEAR(b, m / (1.0 / std::cos(std::sqrt(m) * 0.8) - 1.0), 2e-3);
        const double n = critical_M_bisect(m, 0.8, RegionSign::Negative);
        EXPECT_NEAR(n, region_boundary_closed_Tle1(m, 0.8, RegionSign::Negative), 1e-3) << m;
    }
}

TEST(CriticalM, BisectionCertificate) {
    const double m = 0.6, T = 1.6;
    const double b = critical_M_bisect(m, T, RegionSign::Positive);
    EXPECT_TRUE(has_sign(make_kernel(m, b - 1e-3, T), RegionSign::Positive));
    EXPECT_FALSE(has_sign(make_kernel(m, b + 1e-3, T), RegionSign::Positive));
    EXPECT_GT(m + b, 0.0);
}

TEST(CriticalM, BadBracket) {
    EXPECT_THROW(critical_M_bisect(0.0, 0.5, RegionSign::Positive, {10.0, 20.0}), BracketError);
    EXPECT_THROW(critical_M_bisect(0.0, 0.5, RegionSign::Positive, {0.1, 1.0}), BracketError);
}

TEST(Alpha, ValuesResidualsAndTIndependence) {
    const double a2 = solve_alpha2(), a3 = solve_alpha3();
    EXPECT_NEAR(a2, -2.091, 2e-3);
    EXPECT_NEAR(a3, -2.693, 2e-3);
    EXPECT_LT(std::abs(alpha2_residual(a2)), 1e-10);
    EXPECT_LT(std::abs(alpha3_residual(a3)), 1e-10);
    for (double T : {0.3, 0.7, 1.0}) {
        EXPECT_NEAR(solve_alpha2(T), a2, 1e-8);
        EXPECT_NEAR(solve_alpha3(T), a3, 1e-8);
    }
}

TEST(ClosedForm, LimitsAndBranchContinuity) {
    const double T = 0.6;
    EXPECT_NEAR(region_boundary_closed_Tle1(1e-7, T, RegionSign::Positive), 2 / (T * T), 1e-5);
    EXPECT_NEAR(region_boundary_closed_Tle1(-1e-7, T, RegionSign::Positive), 2 / (T * T), 1e-5);
    EXPECT_NEAR(region_boundary_closed_Tle1(1e-7, T, RegionSign::Negative), -2 / (T * T), 1e-5);
    EXPECT_NEAR(region_boundary_closed_Tle1(-1e-7, T, RegionSign::Negative), -2 / (T * T), 1e-5);
    const double a2 = solve_alpha2() / (T * T), a3 = solve_alpha3() / (T * T);
    for (double eps : {1e-7}) {
        EXPECT_NEAR(region_boundary_closed_Tle1(a2 + eps, T, RegionSign::Positive),
                    region_boundary_closed_Tle1(a2 - eps, T, RegionSign::Positive), 1e-4);
        EXPECT_NEAR(region_boundary_closed_Tle1(a3 + eps, T, RegionSign::Negative),
                    region_boundary_closed_Tle1(a3 - eps, T, RegionSign::Negative), 1e-4);
    }
    EXPECT_THROW(region_boundary_closed_Tle1(1.0, 1.5, RegionSign::Positive), DomainError);
    EXPECT_THROW(region_boundary_closed_Tle1(-std::pow(pi / T, 2) * 1.01, T, RegionSign::Positive), DomainError);
}

TEST(ClosedForm, NecessaryCondition) {
    const double T = 0.5;
    for (double m : linspace(-0.95 * std::pow(pi / T, 2), 0.95 * std::pow(pi / (2 * T), 2), 41)) {
        EXPECT_GT(m + region_boundary_closed_Tle1(m, T, RegionSign::Positive), 0.0) << m;
        EXPECT_LT(m + region_boundary_closed_Tle1(m, T, RegionSign::Negative), 0.0) << m;
    }
}

TEST(Tbar, FixedPointAtBoundary) {
    const double m = 1.0, T = 0.8;
    const double Mstar = region_boundary_closed_Tle1(m, T, RegionSign::Positive);
    // the minimum at the boundary sits at (T, T)
    EXPECT_NEAR(tbar_operator(m, Mstar, T, T, T), Mstar, 1e-3);
    const auto kb = make_kernel(m, critical_M_bisect(m, T, RegionSign::Positive), T);
    const auto mm = min_max_H(kb);
    EXPECT_NEAR(tbar_operator(kb, mm.argmin.first, mm.argmin.second), kb.M(), 1e-3);
}

TEST(Tbar, ReducesForMZeroAndIsPositive) {
    const double m = 1.0, T = 0.8, t = 0.3, s = -0.2;
    const ReflectionKernel g(m, T);
    const double direct = g.eval(t, s) / (g.integral_s(t, -T, T) * g.eval(0.0, s));
    EXPECT_NEAR(tbar_operator(m, 0.0, T, t, s), direct, 1e-12);
    EXPECT_GT(tbar_operator(m, 0.5, T, t, s), 0.0);
    EXPECT_THROW(tbar_operator(make_kernel(0.0, 1.0, T), t, s), DomainError);
}

TEST(Scan, T16NecessaryConditionAndMZero) {
    ScanConfig cfg;
    cfg.grid_n = 61;
    const auto samples = scan_region(linspace(-1.5, 0.9, 9), 1.6, cfg);
    ASSERT_EQ(samples.size(), 9u);
    for (const auto& r : samples) EXPECT_TRUE(necessary_condition_ok(r)) << r.m;
    const auto mid = scan_region({0.0}, 1.6, cfg);
    ASSERT_TRUE(mid[0].M_pos_upper.has_value());
    EXPECT_GT(*mid[0].M_pos_upper, 0.0);
}

TEST(Scan, DeterministicAcrossThreadCounts) {
    ScanConfig a, b;
    a.grid_n = b.grid_n = 41;
    a.threads = 1;
    b.threads = 4;
    const auto ms = linspace(-3.0, 3.0, 7);
    const auto ra = scan_region(ms, 0.7, a), rb = scan_region(ms, 0.7, b);
    for (std::size_t i = 0; i < ms.size(); ++i) {
        EXPECT_EQ(ra[i].M_pos_upper, rb[i].M_pos_upper);
        EXPECT_EQ(ra[i].M_neg_lower, rb[i].M_neg_lower);
    }
}

TEST(Extremum, DiagonalForNonnegativeParameters) {
    for (auto [m, M] : {std::pair{0.5, 0.5}, std::pair{1.0, 1.0}, std::pair{0.0, 2.0}, std::pair{2.0, 0.3}}) {
        const auto k = make_kernel(m, M, 0.9);
        const auto mm = min_max_H(k);
        ASSERT_GT(mm.min, 0.0);
        // t = -T and t = T are the same point of the periodic square
        const double d = std::abs(mm.argmin.first - mm.argmin.second);
        EXPECT_LT(std::min(d, 2 * 0.9 - d), 2 * 0.9 / 100) << m << " " << M;
    }
}

TEST(Candidates, BoundaryCurveAgreesForPositiveM) {
    const double T = 0.8;
    for (double m : {0.5, 1.5}) {
        const auto c = candidate_point_boundary(m, T, RegionSign::Positive);
        ASSERT_TRUE(c.has_value());
        EXPECT_NEAR(*c, region_boundary_closed_Tle1(m, T, RegionSign::Positive), 1e-6);
    }
}

TEST(Conjecture, NegativeRegionForLargeT) {
    // Reported, not asserted: H < 0 for m in (0, (pi/2)^2) and
    // m/(cos(sqrt m) - 1) < M < -m, independently of T.
    for (double T : {1.3, 2.2})
        for (double m : {0.5, 1.5}) {
            const double lo = m / (std::cos(std::sqrt(m)) - 1.0);
            const double M = 0.5 * (lo - m);
            const auto mm = min_max_H(make_kernel(m, M, T), 61);
            RecordProperty("T" + std::to_string(T) + "_m" + std::to_string(m) + "_max", std::to_string(mm.max));
            std::cout << "conjecture T=" << T << " m=" << m << " M=" << M << " max H=" << mm.max
                      << (mm.max < 0 ? " (consistent)" : " (counterexample)") << "\n";
        }
}
