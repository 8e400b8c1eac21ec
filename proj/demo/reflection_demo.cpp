// Walks through the library: kernels, sign regions, eigenvalues and a nonlinear solve.

#include <cmath>
#include <cstdio>
#include <numbers>

#include "greens/greens.hpp"

using namespace greens;

int main() {
    std::printf("greens %s\n\n", kVersion);

    const double T = 0.8;
    const ReflectionKernel g(1.0, T);
    std::printf("G_1 on [-%.1f, %.1f]: G(0.2, -0.5) = %.12f, sign: %s\n", T, T, g(0.2, -0.5),
                to_string(sign_classification_G(g)));
    std::printf("cbar = %.15f\n\n", solve_cbar());

    const CompositeKernel h = make_kernel(1.0, 0.5, 1.6);
    const auto d = certify(h);
    std::printf("H_{1,0.5} on T=1.6 (%s, cond %.3g): ODE residual %.2e, jump error %.2e\n", to_string(h.mode()),
                h.condition_number(), d.residual_ode, d.jump_error);
    std::printf("integral of H(0.3, .) = %.12f (1/(m+M) = %.12f)\n\n", integral_H(h, 0.3, -1.6, 1.6), 1.0 / 1.5);

    std::printf("constant-sign boundaries at T = 0.5:\n  m        M_pos      M_neg\n");
    for (double m : {-20.0, -5.0, 0.0, 5.0}) {
        const double p = critical_M_bisect(m, 0.5, RegionSign::Positive);
        const double n = critical_M_bisect(m, 0.5, RegionSign::Negative);
        std::printf("  %-8.2f %-10.5f %.5f\n", m, p, n);
    }

    std::printf("\nfirst Dirichlet eigenvalue lambda_1(T):\n");
    for (double t : {0.5, 1.0, 1.5, 2.5}) std::printf("  T = %.1f  lambda_1 = %.10f\n", t, lambda1_zsinxelo(t).lambda);

    SchrodingerParams s;
    const auto [L, l] = compute_L_l(make_kernel(-2.0 * s.beta, 0.0, s.T));
    const auto w = schrodinger_alpha_windows(s, L, l);
    s.alpha = 0.5 * (std::max(w.cond2_lower, w.cone_lower) + w.cond2_upper);
    const auto res = schrodinger_demo(s);
    std::printf("\nSchrodinger model, alpha = %.6f: %s via %s, v in [%.6f, %.6f], residual %.2e\n", s.alpha,
                to_string(res.existence.conclusion), res.solve.method.c_str(), res.solve.min_value,
                res.solve.max_value, res.solve.ode_residual);
    std::printf("constant solution sqrt((mu - beta)/alpha) = %.6f\n", std::sqrt((s.mu - s.beta) / s.alpha));
    return 0;
}
