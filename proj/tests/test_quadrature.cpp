#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "greens/quadrature.hpp"
#include "greens/reflection_kernel.hpp"

using namespace greens;

TEST(Integrate, ConstantGivesLength) {
    EXPECT_NEAR(integrate([](double) { return 1.0; }, -0.7, 0.7, {}, {}), 1.4, 1e-14);
}

TEST(Integrate, OddFunctionVanishes) {
    EXPECT_NEAR(integrate([](double s) { return s; }, -1.0, 1.0, {}, {}), 0.0, 1e-15);
}

TEST(Integrate, KernelRowNormalization) {
    const ReflectionKernel g(1.0, 1.0);
    const double v = integrate([&](double s) { return g.eval(0.3, s); }, -1.0, 1.0, BreakpointSet{0.3, -0.3}, {});
    EXPECT_NEAR(v, 1.0, 1e-10);
}

TEST(Integrate, KinkNeedsBreakpoint) {
    auto f = [](double s) { return std::abs(s - 0.3); };
    const double exact = (1.3 * 1.3 + 0.7 * 0.7) / 2.0;
    EXPECT_NEAR(integrate(f, -1.0, 1.0, BreakpointSet{0.3}, {}), exact, 1e-13);
}

TEST(Integrate, AdditiveOverAdjacentIntervals) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    auto f = [](double s) { return std::exp(std::sin(3.0 * s)) + std::abs(s); };
    for (int i = 0; i < 20; ++i) {
        double a = u(rng), c = u(rng);
        if (a > c) std::swap(a, c);
        const double b = 0.5 * (a + c) + 0.1 * (c - a) * u(rng) / 2.0;
        const BreakpointSet brk{0.0};
        const double whole = integrate(f, a, c, brk, {});
        const double parts = integrate(f, a, b, brk, {}) + integrate(f, b, c, brk, {});
        EXPECT_NEAR(whole, parts, 1e-12);
    }
}

TEST(Integrate, NonConvergenceCarriesEstimate) {
    QuadConfig cfg;
    cfg.order = 2;
    cfg.max_panels = 8;
    cfg.tol = 1e-15;
    try {
        integrate([](double s) { return std::sqrt(std::abs(s)); }, -1.0, 1.0, {}, cfg);
        FAIL() << "expected QuadratureError";
    } catch (const QuadratureError& e) {
        EXPECT_TRUE(std::isfinite(e.best_estimate()));
        EXPECT_GT(e.achieved_error(), 0.0);
    }
}

TEST(Integrate, RejectsReversedInterval) {
    EXPECT_THROW(integrate([](double) { return 1.0; }, 1.0, 0.0, {}, {}), DomainError);
}

TEST(QuadConfig, ValidatesFields) {
    QuadConfig c;
    c.order = 1;
    EXPECT_THROW(c.validate(), DomainError);
    c.order = 16;
    c.tol = 0.0;
    EXPECT_THROW(c.validate(), DomainError);
}

TEST(Breakpoints, SortedAndDeduplicated) {
    BreakpointSet b{0.5, -0.2, 0.5 + 1e-16, 0.1};
    ASSERT_EQ(b.points().size(), 3u);
    EXPECT_DOUBLE_EQ(b.points()[0], -0.2);
    EXPECT_DOUBLE_EQ(b.points()[2], 0.5);
}

TEST(GaussRules, IntegratePolynomialsExactly) {
    for (int n : {2, 5, 16, 24}) {
        const auto& gl = gauss_legendre(n);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += gl.weights[i] * std::pow(gl.nodes[i], 2 * n - 2);
        EXPECT_NEAR(acc, 2.0 / (2 * n - 1), 1e-13) << n;
    }
    for (int n : {3, 6, 11}) {
        const auto& lo = gauss_lobatto(n);
        EXPECT_DOUBLE_EQ(lo.nodes.front(), -1.0);
        EXPECT_DOUBLE_EQ(lo.nodes.back(), 1.0);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += lo.weights[i] * std::pow(lo.nodes[i], 2 * n - 4);
        EXPECT_NEAR(acc, 2.0 / (2 * n - 3), 1e-13) << n;
    }
}

TEST(FloorTrunc, DocumentedExamples) {
    EXPECT_EQ(floor_trunc(1.7), 1);
    EXPECT_EQ(floor_trunc(-1.5), -1);
    EXPECT_EQ(floor_trunc(-1.0), -1);
    EXPECT_EQ(floor_trunc(0.999), 0);
    EXPECT_EQ(floor_trunc(-0.999), 0);
    EXPECT_EQ(floor_trunc(2.0), 2);
    EXPECT_EQ(floor_trunc(0.0), 0);
}

TEST(FloorTrunc, OddOffIntegers) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int i = 0; i < 1000; ++i) {
        const double t = u(rng);
        if (t == std::round(t)) continue;
        EXPECT_EQ(floor_trunc(t), -floor_trunc(-t)) << t;
    }
}

TEST(FloorTrunc, ConstantOnPreimages) {
    for (int n = 0; n < 4; ++n)
        for (double f : {0.0, 0.25, 0.5, 0.999}) {
            EXPECT_EQ(floor_trunc(n + f), n);
            EXPECT_EQ(floor_trunc(-n - f), -n) << n << " " << f;
        }
    EXPECT_EQ(floor_trunc(-1.999), -1);
    EXPECT_EQ(floor_trunc(-2.0), -2);
}
