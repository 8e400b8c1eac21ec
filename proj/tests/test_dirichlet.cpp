#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "greens/composite_kernel.hpp"
#include "greens/dirichlet.hpp"
#include "oracles.hpp"

using namespace greens;
using std::numbers::pi;

namespace {

/// lambda^{s0} as the first M > 0 at which H_{m,M}(s0, s0) changes sign:
/// there H(., s0) itself is a nontrivial solution vanishing at s0.
double h_root_oracle(double m, double T, double s0) {
    auto h = [&](double M) { return make_kernel(m, M, T).eval(s0, s0); };
    const double upper = 10.0 * std::max(2.0 / (T * T), std::pow(pi / (2 * T), 2));
    double prev = 1e-3, fprev = h(prev);
    for (int i = 1; i <= 4000; ++i) {
        const double M = 1e-3 * std::exp(std::log(upper / 1e-3) * i / 4000);
        double f;
        try {
            f = h(M);
        } catch (const Error&) {
            continue;
        }
        // a sign change through a pole of H is not a root
        if ((f > 0) != (fprev > 0) && std::abs(f) < 1e3 && std::abs(fprev) < 1e3)
            return oracle::bisect(h, prev, M, 200);
        prev = M;
        fprev = f;
    }
    return std::nan("");
}

}  // namespace

TEST(Variant, Classification) {
    EXPECT_EQ(make_dirichlet_problem(0.0, 2.5, 2.5).variant, DirichletVariant::ZsinxeloM0);
    EXPECT_EQ(make_dirichlet_problem(0.0, 2.5, 2.0).variant, DirichletVariant::IntegerS0);
    EXPECT_EQ(make_dirichlet_problem(1.0, 2.5, 1.3).variant, DirichletVariant::NonIntegerS0);
    EXPECT_THROW(make_dirichlet_problem(0.0, 1.0, 1.5), DomainError);
    EXPECT_THROW(make_dirichlet_problem(-1.0, 1.0, 0.5), DomainError);
}

TEST(DirichletM0, SmallT) {
    for (double T : {0.3, 0.5, 0.9}) {
        const auto r = lambda1_zsinxelo(T);
        EXPECT_NEAR(r.lambda, 2.0 / (T * T), 1e-8) << T;
        EXPECT_LT(r.residual, 1e-8);
        EXPECT_EQ(r.method, EigenMethod::DeterminantRoot);
    }
}

TEST(DirichletM0, MatchesHRootOracle) {
    for (auto [T, s0] : {std::pair{0.5, 0.3}, std::pair{1.6, 1.6}, std::pair{1.6, 0.7}, std::pair{2.5, 1.0},
                         std::pair{2.5, 2.5}, std::pair{3.2, 0.4}}) {
        const auto r = dirichlet_eig_m0(T, s0);
        EXPECT_NEAR(r.lambda, h_root_oracle(0.0, T, s0), 1e-7) << T << " " << s0;
    }
}

TEST(DirichletM0, TableRows) {
    EXPECT_NEAR(lambda1_zsinxelo(2.5).lambda, table_lambda1(2.5), 1e-6);
    EXPECT_NEAR(lambda1_zsinxelo(2.2).lambda, table_lambda1(2.2), 1e-6);
    for (double T : {1.2, 1.5, 1.8}) EXPECT_NEAR(lambda1_zsinxelo(T).lambda, table_lambda1_corrected(T), 1e-9) << T;
}

TEST(DirichletM0, DecreasingInT) {
    double prev = 1e300;
    for (double T : {0.3, 0.7, 1.2, 1.8, 2.5, 3.5}) {
        const double l = lambda1_zsinxelo(T).lambda;
        EXPECT_LT(l, prev) << T;
        prev = l;
    }
}

TEST(DirichletM0, DecreasingInS0AtT48) {
    const double T = 4.8;
    double prev = 1e300;
    for (double s0 : s0_grid(T, 25)) {
        const auto r = dirichlet_eig_m0(T, s0);
        EXPECT_LT(r.lambda, prev) << s0;
        EXPECT_LT(r.residual, 1e-8);
        prev = r.lambda;
    }
}

TEST(GdKernel, Properties) {
    EXPECT_DOUBLE_EQ(gd_kernel(1.3, 0, 0), 0.65);
    for (double t : {-0.9, -0.2, 0.5})
        for (double s : {-0.7, 0.1, 0.95}) {
            EXPECT_DOUBLE_EQ(gd_kernel(1.0, t, s), gd_kernel(1.0, s, t));
            EXPECT_GT(gd_kernel(2.0, t, s), gd_kernel(1.0, t, s));
            EXPECT_GT(gd_kernel(1.0, t, s), 0.0);
        }
    EXPECT_DOUBLE_EQ(gd_kernel(1.0, 1.0, 0.3), 0.0);
    EXPECT_THROW(gd_kernel(1.0, 1.5, 0.0), DomainError);
}

TEST(SpectralRadius, AgreesWithDeterminant) {
    const auto r = lambda_via_spectral_radius(0.5);
    EXPECT_NEAR(r.lambda, 8.0, 1e-3);
    EXPECT_TRUE(r.positive_iterates);
    for (double T : {0.7, 1.4, 2.3, 3.5}) {
        const auto s = lambda_via_spectral_radius(T);
        EXPECT_NEAR(s.lambda, lambda1_zsinxelo(T).lambda, 1e-4) << T;
        EXPECT_TRUE(s.positive_iterates);
    }
    EXPECT_THROW(lambda_via_spectral_radius(1.0, 100), DomainError);
}

TEST(ClosedFormTle1, Identities) {
    const double T = 0.8;
    for (double m : {0.1, 0.5, 1.0, 2.0, 3.5}) {
        const double l = lambda_closed_Tle1(m, T, T);
        EXPECT_NEAR(l * (1.0 / std::cos(std::sqrt(m) * T) - 1.0), m, 1e-12);
        double best = 1e300, arg = -1;
        for (int i = 1; i <= 21; ++i) {
            const double s0 = T * i / 21.0;
            const double v = lambda_closed_Tle1(m, T, s0);
            if (v < best) best = v, arg = s0;
        }
        EXPECT_DOUBLE_EQ(arg, T) << m;
    }
    EXPECT_NEAR(lambda_closed_Tle1(1e-8, T, T), 2 / (T * T), 1e-6);
    EXPECT_THROW(lambda_closed_Tle1(1.0, T, 0.0), DomainError);
    EXPECT_THROW(lambda_closed_Tle1(1.0, 1.2, 0.5), DomainError);
}

TEST(ClosedFormTle1, MatchesHRootOracle) {
    EXPECT_NEAR(lambda_closed_Tle1(1.0, 0.8, 0.5), 2.897346300482, 1e-9);
    EXPECT_NEAR(lambda_closed_Tle1(1.0, 0.8, 0.8), 2.297138548128, 1e-9);
    for (double s0 : {0.2, 0.5, 0.8}) EXPECT_NEAR(lambda_closed_Tle1(1.0, 0.8, s0), h_root_oracle(1.0, 0.8, s0), 1e-8);
}

TEST(General, ReflectionOnly) {
    for (double T : {0.5, 1.0, 2.3}) {
        const auto r = dirichlet_eig_general(0.0, T, T, 24, DirichletVariant::ReflectionOnly);
        EXPECT_NEAR(r.lambda, std::pow(pi / (2 * T), 2), 1e-9) << T;
    }
}

TEST(General, MatchesClosedForm) {
    const auto r = dirichlet_eig_general(1.0, 0.8, 0.5);
    EXPECT_NEAR(r.lambda, lambda_closed_Tle1(1.0, 0.8, 0.5), 1e-5);
    EXPECT_LT(r.residual, 1e-8);
    const auto rt = dirichlet_eig_general(1.0, 0.8, 0.8);
    EXPECT_NEAR(rt.lambda, 1.0 / (1.0 / std::cos(0.8) - 1.0), 1e-5);
}

TEST(General, ReducesToM0) {
    for (auto [T, s0] : {std::pair{0.5, 0.5}, std::pair{2.5, 2.5}, std::pair{2.5, 1.3}, std::pair{3.0, 2.0}})
        EXPECT_NEAR(dirichlet_eig_general(0.0, T, s0).lambda, dirichlet_eig_m0(T, s0).lambda, 1e-9) << T << " " << s0;
}

TEST(General, MatchesHRootOracleLargeT) {
    for (auto [m, T, s0] : {std::tuple{0.3, 1.6, 1.6}, std::tuple{0.3, 1.6, 0.9}, std::tuple{0.2, 2.4, 1.0}}) {
        EXPECT_NEAR(dirichlet_eig_general(m, T, s0).lambda, h_root_oracle(m, T, s0), 1e-7) << m << " " << T << " " << s0;
        EXPECT_LT(dirichlet_general_refinement_gap(m, T, s0), 1e-9);
    }
}
