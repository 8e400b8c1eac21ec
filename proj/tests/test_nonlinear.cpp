#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "greens/nonlinear.hpp"
#include "oracles.hpp"

using namespace greens;
using std::numbers::pi;

namespace {

NonlinearProblem constant_shift(double c, double m, double M, double T) {
    NonlinearProblem p;
    p.m = m, p.M = M, p.T = T;
    p.f = [=](double, double, double y, double z) { return c - m * y - M * z; };
    return p;
}

/// v = a + b cos(pi t / T) solves v'' = f with a mild nonlinear perturbation.
NonlinearProblem manufactured(double a, double b, double m, double M, double T) {
    auto v = [=](double t) { return a + b * std::cos(pi * t / T); };
    NonlinearProblem p;
    p.m = m, p.M = M, p.T = T;
    p.f = [=](double t, double x, double y, double z) {
        const double vpp = -b * (pi / T) * (pi / T) * std::cos(pi * t / T);
        return vpp - m * (y - v(-t)) - M * (z - v(floor_trunc(t))) + 0.05 * std::sin(x - v(t));
    };
    return p;
}

SchrodingerParams midpoint_schrodinger() {
    SchrodingerParams s;
    s.T = 0.8, s.beta = -0.1, s.mu = 0.05, s.hbar = 1.0, s.mp = 1.0, s.r = 1.0, s.R = 2.0;
    const CompositeKernel k = make_kernel(-2.0 * s.beta, 0.0, s.T);
    const auto [L, l] = compute_L_l(k);
    const auto w = schrodinger_alpha_windows(s, L, l);
    s.alpha = 0.5 * (std::max(w.cond2_lower, w.cone_lower) + w.cond2_upper);
    return s;
}

}  // namespace

TEST(FixedPointGrid, SymmetricWithIntegerNodes) {
    const CompositeKernel k = make_kernel(1.0, 0.5, 2.3);
    const FixedPointGrid g(k, 10, 401);
    const auto& t = g.nodes();
    EXPECT_DOUBLE_EQ(t.front(), -2.3);
    EXPECT_DOUBLE_EQ(t.back(), 2.3);
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(t[g.mirror(i)], -t[i]);
    for (std::size_t i = 1; i < t.size(); ++i) EXPECT_LT(t[i - 1], t[i]);
    for (int n : {-2, -1, 0, 1, 2}) EXPECT_NE(std::find(t.begin(), t.end(), double(n)), t.end());
    for (std::size_t p = 0; p < g.panels(); ++p) EXPECT_EQ(t[g.label_node(p)], g.panel_label(p));
}

TEST(FixedPointGrid, ConstantForcingIntegratesToInverseShift) {
    for (auto [m, M, T] : {std::tuple{1.0, 0.5, 2.3}, {0.7, 0.0, 0.8}, {0.0, 1.2, 1.5}}) {
        const CompositeKernel k = make_kernel(m, M, T);
        const FixedPointGrid g(k, 10, 201);
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.panels() * (g.degree() + 1));
        const Eigen::VectorXd v = g.apply(ones);
        EXPECT_LT((v.array() - 1.0 / (m + M)).abs().maxCoeff(), 1e-10) << m << " " << M << " " << T;
    }
}

TEST(FixedPointGrid, ProductIntegrationMatchesAdaptiveQuadrature) {
    const CompositeKernel k = make_kernel(1.0, 0.5, 2.3);
    const FixedPointGrid g(k, 10, 401);
    auto sigma = [](double s) { return std::exp(std::sin(s)) + s * s; };
    Eigen::VectorXd smp(g.panels() * (g.degree() + 1));
    for (std::size_t p = 0; p < g.panels(); ++p)
        for (int q = 0; q <= g.degree(); ++q) smp[p * (g.degree() + 1) + q] = sigma(g.panel_node(p, q));
    const Eigen::VectorXd v = g.apply(smp);
    for (std::size_t i : {std::size_t{0}, std::size_t{57}, g.size() / 2, std::size_t{311}}) {
        const double t = g.nodes()[i];
        BreakpointSet brk{t, -t, 0.0, 1.0, -1.0, 2.0, -2.0};
        const double ref = integrate([&](double s) { return k.eval(t, s) * sigma(s); }, -2.3, 2.3, brk);
        EXPECT_NEAR(v[i], ref, 1e-10) << t;
    }
}

TEST(Picard, ConstantShiftExactInOneStep) {
    const double c = 1.7, m = 1.0, M = 0.5, T = 2.3;
    const auto p = constant_shift(c, m, M, T);
    PicardOptions opt;
    opt.damping = 1.0;
    const auto [sol, rep] = picard_solve(p, make_kernel(m, M, T), 0.0, opt);
    EXPECT_TRUE(rep.converged);
    EXPECT_LE(rep.iterations, 2);
    EXPECT_EQ(rep.method, "picard");
    for (double v : sol.v) EXPECT_NEAR(v, c / (m + M), 1e-12);
}

TEST(Picard, ManufacturedSolutionRecovered) {
    for (auto [m, M, T] : {std::tuple{1.0, 0.5, 1.6}, {0.8, 0.0, 0.9}, {0.6, 0.3, 2.5}}) {
        const double a = 2.0, b = 0.3;
        const auto p = manufactured(a, b, m, M, T);
        const auto [sol, rep] = picard_solve(p, make_kernel(m, M, T), 1.0);
        ASSERT_TRUE(rep.converged);
        double err = 0.0;
        for (std::size_t i = 0; i < sol.t.size(); ++i)
            err = std::max(err, std::abs(sol.v[i] - (a + b * std::cos(pi * sol.t[i] / T))));
        EXPECT_LT(err, 1e-6) << m << " " << M << " " << T;
        EXPECT_LT(rep.ode_residual, 1e-5);
        EXPECT_LT(rep.periodicity_error, 1e-9);
        EXPECT_LT(rep.periodicity_dt_error, 1e-6);
    }
}

TEST(Picard, NonConvergenceCarriesLastIterate) {
    const auto p = schrodinger_problem(midpoint_schrodinger());
    PicardOptions opt;
    opt.max_iter = 3;
    opt.newton_fallback = false;
    try {
        picard_solve(p, make_kernel(p.m, p.M, p.T), 1.0, opt);
        FAIL() << "expected PicardNonConvergence";
    } catch (const PicardNonConvergence& e) {
        EXPECT_FALSE(e.last_iterate().v.empty());
        EXPECT_EQ(e.report().iterations, 3);
    }
}

TEST(Picard, RejectsBadOptions) {
    const auto p = constant_shift(1.0, 1.0, 0.0, 0.8);
    const auto k = make_kernel(1.0, 0.0, 0.8);
    PicardOptions opt;
    opt.damping = 0.0;
    EXPECT_THROW(picard_solve(p, k, 0.0, opt), DomainError);
    EXPECT_THROW(picard_solve(p, make_kernel(1.0, 0.0, 0.9), 0.0), DomainError);
}

TEST(Existence, LAndLRequirePositiveKernel) {
    const auto [L, l] = compute_L_l(make_kernel(0.2, 0.0, 0.8));
    EXPECT_GT(l, 0.0);
    EXPECT_GE(L, l);
    EXPECT_THROW(compute_L_l(make_kernel(-1.0, 0.0, 0.8)), InvalidRegion);
}

TEST(Existence, ConstantShiftSatisfiesConditionOne) {
    const double c = 1.0, m = 0.5, M = 0.5, T = 0.8;
    const auto k = make_kernel(m, M, T);
    const auto [L, l] = compute_L_l(k);
    // condition 1 holds when r <= 2 T l^2 c / L and R >= 2 T L c
    const ConeBounds b{0.5 * 2 * T * l * l * c / L, 2.0 * 2 * T * L * c, L, l};
    const auto rep = krasnoselskii_check(constant_shift(c, m, M, T), b, 7);
    EXPECT_TRUE(rep.cone_ok);
    EXPECT_TRUE(rep.cond1_ok);
    EXPECT_FALSE(rep.cond2_ok);
    EXPECT_EQ(rep.conclusion, Conclusion::PositiveSolutionExists);
    for (const auto& v : rep.violating_points) EXPECT_EQ(v.check.substr(0, 5), "cond2");
}

TEST(Existence, NegativeCheckIsDualOfPositive) {
    const auto s = midpoint_schrodinger();
    const auto p = schrodinger_problem(s);
    const auto [L, l] = compute_L_l(make_kernel(p.m, p.M, p.T));
    const ConeBounds b{s.r, s.R, L, l};
    const auto neg = krasnoselskii_check_negative(p, b, 7);
    const auto dual = krasnoselskii_check(reflect_problem(p), b, 7);
    EXPECT_EQ(neg.cone_ok, dual.cone_ok);
    EXPECT_EQ(neg.cond1_ok, dual.cond1_ok);
    EXPECT_EQ(neg.cond2_ok, dual.cond2_ok);
    // f is odd in (x, y, z), so the negative check succeeds as well
    EXPECT_EQ(neg.conclusion, Conclusion::NegativeSolutionExists);
}

TEST(Existence, CounterexampleReported) {
    const auto p = constant_shift(-1.0, 1.0, 0.0, 0.8);
    const auto [L, l] = compute_L_l(make_kernel(1.0, 0.0, 0.8));
    const auto rep = krasnoselskii_check(p, ConeBounds{0.1, 10.0, L, l}, 5);
    EXPECT_FALSE(rep.cone_ok);
    EXPECT_EQ(rep.conclusion, Conclusion::Inconclusive);
    ASSERT_FALSE(rep.violating_points.empty());
    EXPECT_LT(rep.violating_points.front().lhs, rep.violating_points.front().bound);
}

TEST(Schrodinger, WindowsFromConditionInequalities) {
    SchrodingerParams s = midpoint_schrodinger();
    const auto p0 = schrodinger_problem(s);
    const auto [L, l] = compute_L_l(make_kernel(p0.m, 0.0, s.T));
    const auto w = schrodinger_alpha_windows(s, L, l);
    ASSERT_LT(w.cond2_lower, w.cond2_upper);
    EXPECT_LE(w.cond2_swapped_lower, w.cond2_lower);
    EXPECT_GE(w.cond2_swapped_upper, w.cond2_upper);
    const ConeBounds b{s.r, s.R, L, l};
    // inside the derived window the sampled condition 2 holds
    EXPECT_TRUE(krasnoselskii_check(schrodinger_problem(s), b, 7).cond2_ok);
    // inside the swapped window but outside the derived one, condition 2 fails at a sample
    for (double alpha : {0.5 * (w.cond2_swapped_lower + w.cond2_lower), w.cond2_upper * 1.05}) {
        if (alpha > w.cond2_swapped_upper) continue;
        s.alpha = alpha;
        EXPECT_FALSE(krasnoselskii_check(schrodinger_problem(s), b, 7).cond2_ok) << alpha;
    }
}

TEST(Schrodinger, DemoFindsPositiveSolution) {
    const auto s = midpoint_schrodinger();
    const auto res = schrodinger_demo(s);
    EXPECT_NEAR(res.m, 0.2, 1e-15);
    EXPECT_TRUE(res.prescreen_cone);
    EXPECT_TRUE(res.prescreen_cond2);
    EXPECT_EQ(res.existence.conclusion, Conclusion::PositiveSolutionExists);
    EXPECT_TRUE(res.solve.converged);
    EXPECT_LT(res.solve.ode_residual, 1e-5);
    EXPECT_GT(res.solve.min_value, 0.0);
    const double c = std::sqrt((s.mu - s.beta) / s.alpha);
    for (double v : res.solution.v) EXPECT_NEAR(v, c, 1e-8);
}

TEST(Schrodinger, RejectsBetaOutsideRange) {
    SchrodingerParams s = midpoint_schrodinger();
    s.beta = 0.1;
    EXPECT_THROW(schrodinger_demo(s), InvalidRegion);
    s.beta = -std::pow(pi / (2 * s.T), 2) - 0.01;
    EXPECT_THROW(schrodinger_demo(s), InvalidRegion);
}
