#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "greens/errors.hpp"
#include "greens/numerics.hpp"
#include "greens/quadrature.hpp"

namespace greens {

enum class DirichletVariant { NonIntegerS0, IntegerS0, ZsinxeloM0, ReflectionOnly };
enum class EigenMethod { DeterminantRoot, SpectralRadius, ClosedForm };

inline const char* to_string(DirichletVariant v) {
    switch (v) {
        case DirichletVariant::NonIntegerS0: return "NonIntegerS0";
        case DirichletVariant::IntegerS0: return "IntegerS0";
        case DirichletVariant::ZsinxeloM0: return "ZsinxeloM0";
        case DirichletVariant::ReflectionOnly: return "ReflectionOnly";
    }
    return "?";
}

inline const char* to_string(EigenMethod m) {
    switch (m) {
        case EigenMethod::DeterminantRoot: return "DeterminantRoot";
        case EigenMethod::SpectralRadius: return "SpectralRadius";
        case EigenMethod::ClosedForm: return "ClosedForm";
    }
    return "?";
}

struct DirichletProblem {
    double m = 0.0;
    double T = 1.0;
    double s0 = 1.0;
    DirichletVariant variant = DirichletVariant::ZsinxeloM0;
};

/// Picks the variant from (m, s0); s0 must be exactly integral to count as one.
inline DirichletProblem make_dirichlet_problem(double m, double T, double s0) {
    if (!(T > 0.0)) throw DomainError("Dirichlet problem: T must be > 0");
    if (!(s0 >= 0.0 && s0 <= T)) throw DomainError("Dirichlet problem: s0 must lie in [0, T]");
    if (m < 0.0) throw DomainError("Dirichlet problem: m must be >= 0");
    DirichletProblem p{m, T, s0, DirichletVariant::NonIntegerS0};
    if (m == 0.0 && s0 == T)
        p.variant = DirichletVariant::ZsinxeloM0;
    else if (s0 == std::floor(s0))
        p.variant = DirichletVariant::IntegerS0;
    return p;
}

struct EigenResult {
    double lambda = 0.0;
    EigenMethod method = EigenMethod::DeterminantRoot;
    double residual = 0.0;
    std::pair<double, double> bracket{0.0, 0.0};
    DirichletVariant variant = DirichletVariant::NonIntegerS0;
    bool positive_iterates = true;  // spectral radius only
    int iterations = 0;
};

namespace detail {

/// Cut circle [-T, T] (periodic seam at +-T) split at the given points.
struct CircleLayout {
    std::vector<double> bounds;  // piece p is [bounds[p], bounds[p+1]]
    std::size_t pieces() const { return bounds.size() - 1; }
    double lo(std::size_t p) const { return bounds[p]; }
    double hi(std::size_t p) const { return bounds[p + 1]; }
    int label(std::size_t p) const { return floor_trunc(0.5 * (lo(p) + hi(p))); }
};

inline CircleLayout make_layout(double T, std::vector<double> cuts) {
    std::vector<double> b{-T, T};
    for (int k = -floor_trunc(T); k <= floor_trunc(T); ++k)
        if (std::abs(k) < T) b.push_back(k);
    for (double c : cuts)
        if (c > -T && c < T) b.push_back(c);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end(), [](double x, double y) { return std::abs(x - y) < 1e-13; }), b.end());
    return {b};
}

inline bool same_point(double a, double b) { return std::abs(a - b) < 1e-13; }

/// Sign and log|det| of a square matrix through LU.
inline std::pair<int, double> sign_logdet(const Eigen::MatrixXd& A) {
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const auto& U = lu.matrixLU();
    int sign = lu.permutationP().determinant() > 0 ? 1 : -1;
    double logabs = 0.0;
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
        const double d = U(i, i);
        if (d == 0.0) return {0, -std::numeric_limits<double>::infinity()};
        if (d < 0) sign = -sign;
        logabs += std::log(std::abs(d));
    }
    return {sign, logabs};
}

/// First sign change of f on a log-spaced grid over [lo, hi], refined by bisection.
template <class F>
std::optional<std::pair<double, double>> first_sign_change(F&& f, double lo, double hi, int points) {
    const double r = std::log(hi / lo);
    double prev_x = lo;
    int prev = f(lo);
    for (int i = 1; i <= points; ++i) {
        const double x = lo * std::exp(r * i / points);
        const int s = f(x);
        if (s != 0 && prev != 0 && s != prev) return std::make_pair(prev_x, x);
        if (s == 0) return std::make_pair(x, x);
        prev_x = x;
        prev = s;
    }
    return std::nullopt;
}

template <class F>
double refine_sign_change(F&& sgn, double a, double b) {
    const int sa = sgn(a);
    for (int i = 0; i < 200 && b - a > 4e-16 * std::abs(b); ++i) {
        const double c = 0.5 * (a + b);
        const int sc = sgn(c);
        if (sc == 0) return c;
        if (sc == sa)
            a = c;
        else
            b = c;
    }
    return 0.5 * (a + b);
}

inline double scan_upper(double T) {
    return 10.0 * std::max(2.0 / (T * T), std::pow(std::numbers::pi / (2.0 * T), 2));
}

inline constexpr int kScanPoints = 4000;

/// Defect of the reconstructed null vector: max |row . x| with each row
/// scaled to unit max-norm, relative to max |x|.
inline double null_residual(Eigen::MatrixXd S) {
    for (Eigen::Index i = 0; i < S.rows(); ++i) {
        const double s = S.row(i).cwiseAbs().maxCoeff();
        if (s > 0.0) S.row(i) /= s;
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeFullV);
    const Eigen::VectorXd x = svd.matrixV().col(S.cols() - 1);
    return (S * x).cwiseAbs().maxCoeff() / x.cwiseAbs().maxCoeff();
}

/// Linear system of the m = 0 problem at parameter M. On each piece
/// v = B + A d - M c_k d^2 / 2 with d the offset from the left end and
/// c_k = v(k) extra unknowns; v vanishes on both sides of s0 and is C^1
/// across every other junction of the circle.
inline Eigen::MatrixXd m0_system(const CircleLayout& L, const std::vector<int>& labels, double s0, double M) {
    const std::size_t P = L.pieces(), K = labels.size();
    const std::size_t n = 2 * P + K;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    auto col_B = [](std::size_t p) { return 2 * p; };
    auto col_A = [](std::size_t p) { return 2 * p + 1; };
    auto col_c = [&](int label) {
        return 2 * P + static_cast<std::size_t>(std::find(labels.begin(), labels.end(), label) - labels.begin());
    };
    std::size_t row = 0;
    // value and slope at the right end of piece p, as coefficient rows
    auto add_value_end = [&](std::size_t r, std::size_t p, double sign) {
        const double d = L.hi(p) - L.lo(p);
        S(r, col_B(p)) += sign;
        S(r, col_A(p)) += sign * d;
        S(r, col_c(L.label(p))) += -sign * M * d * d / 2.0;
    };
    auto add_slope_end = [&](std::size_t r, std::size_t p, double sign) {
        const double d = L.hi(p) - L.lo(p);
        S(r, col_A(p)) += sign;
        S(r, col_c(L.label(p))) += -sign * M * d;
    };
    for (std::size_t j = 0; j < P; ++j) {
        const std::size_t left = j, right = (j + 1) % P;
        const double at = L.hi(left);
        const bool cut = same_point(at, s0) || (same_point(s0, L.bounds.back()) && right == 0);
        if (cut) {
            add_value_end(row++, left, 1.0);
            S(row++, col_B(right)) = 1.0;
        } else {
            add_value_end(row, left, 1.0);
            S(row++, col_B(right)) -= 1.0;
            add_slope_end(row, left, 1.0);
            S(row++, col_A(right)) -= 1.0;
        }
    }
    for (int k : labels) {
        // node k: left end of the piece starting at k (k >= 0), right end of
        // the piece ending at k (k < 0)
        std::size_t p = 0;
        for (; p < P; ++p)
            if ((k >= 0 && same_point(L.lo(p), k)) || (k < 0 && same_point(L.hi(p), k))) break;
        if (p == P) throw DomainError("m0 system: node not found");
        S(row, col_c(k)) = -1.0;
        if (k >= 0)
            S(row, col_B(p)) += 1.0;
        else
            add_value_end(row, p, 1.0);
        ++row;
    }
    return S;
}

inline std::vector<int> node_labels(double T) {
    std::vector<int> out;
    const int n = floor_trunc(T);
    for (int k = -n; k <= n; ++k)
        if (std::abs(k) < T || k == 0) out.push_back(k);
    return out;
}

}  // namespace detail

/// First Dirichlet eigenvalue for m = 0 by the piecewise-quadratic determinant method.
inline EigenResult dirichlet_eig_m0(double T, double s0) {
    const DirichletProblem prob = make_dirichlet_problem(0.0, T, s0);
    const auto L = detail::make_layout(T, {s0});
    const auto labels = detail::node_labels(T);
    auto sgn = [&](double M) { return detail::sign_logdet(detail::m0_system(L, labels, s0, M)).first; };
    const double upper = detail::scan_upper(T);
    const auto br = detail::first_sign_change(sgn, 1e-3, upper, detail::kScanPoints);
    if (!br) throw NotFound("dirichlet_eig_m0: no positive root below " + std::to_string(upper));
    EigenResult r;
    r.lambda = detail::refine_sign_change(sgn, br->first, br->second);
    r.bracket = *br;
    r.method = EigenMethod::DeterminantRoot;
    r.variant = prob.variant;
    r.residual = detail::null_residual(detail::m0_system(L, labels, s0, r.lambda));
    return r;
}

/// Dirichlet kernel of -u'' on [-T, T].
inline double gd_kernel(double T, double t, double s) {
    if (std::abs(t) > T * (1 + 1e-12) || std::abs(s) > T * (1 + 1e-12)) throw DomainError("gd_kernel: outside [-T,T]");
    const double hi = std::max(t, s), lo = std::min(t, s);
    return (T - hi) * (lo + T) / (2.0 * T);
}

namespace detail {

/// Integral of gd(t, .) over [a, b].
inline double gd_row_integral(double T, double t, double a, double b) {
    // s <= t: (T - t)(s + T)/(2T); s >= t: (T - s)(t + T)/(2T)
    double acc = 0.0;
    const double a1 = a, b1 = std::min(b, t);
    if (b1 > a1) acc += (T - t) * (0.5 * (b1 * b1 - a1 * a1) + T * (b1 - a1)) / (2.0 * T);
    const double a2 = std::max(a, t), b2 = b;
    if (b2 > a2) acc += (t + T) * (T * (b2 - a2) - 0.5 * (b2 * b2 - a2 * a2)) / (2.0 * T);
    return acc;
}

struct PowerResult {
    double rho;
    bool positive;
    int iterations;
};

inline PowerResult power_radius(double T, int n) {
    std::vector<double> grid;
    for (int i = 0; i < n; ++i) grid.push_back(-T + 2.0 * T * i / (n - 1));
    const auto labels = node_labels(T);
    for (int k : labels) grid.push_back(k);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }),
               grid.end());
    const std::size_t N = grid.size(), K = labels.size();
    std::vector<std::size_t> node_idx(K);
    for (std::size_t k = 0; k < K; ++k)
        node_idx[k] = std::find_if(grid.begin(), grid.end(), [&](double g) { return g == labels[k]; }) - grid.begin();
    // (K u)(t) = sum_k u(k) q_k(t), q_k(t) = integral of gd(t, .) over the preimage of k
    const double Tn = T;
    Eigen::MatrixXd Q(N, K);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < K; ++k) {
            const int l = labels[k];
            double lo, hi;
            if (l == 0)
                lo = std::max(-1.0, -Tn), hi = std::min(1.0, Tn);
            else if (l > 0)
                lo = l, hi = std::min(l + 1.0, Tn);
            else
                lo = std::max(l - 1.0, -Tn), hi = l;
            Q(i, k) = gd_row_integral(Tn, grid[i], lo, hi);
        }
    Eigen::VectorXd u = Eigen::VectorXd::Ones(N);
    u[0] = u[N - 1] = 0.0;
    double rho = 0.0;
    bool positive = true;
    int it = 0;
    for (; it < 10000; ++it) {
        Eigen::VectorXd uk(K);
        for (std::size_t k = 0; k < K; ++k) uk[k] = u[node_idx[k]];
        const Eigen::VectorXd v = Q * uk;
        const double rq = u.dot(v) / u.dot(u);
        for (std::size_t i = 1; i + 1 < N; ++i) positive = positive && v[i] > 0.0;
        u = v / v.cwiseAbs().maxCoeff();
        if (it > 0 && std::abs(rq - rho) <= 1e-10 * std::abs(rq)) {
            rho = rq;
            break;
        }
        rho = rq;
    }
    if (it >= 10000) throw NonConvergence("power iteration did not converge");
    return {rho, positive, it + 1};
}

}  // namespace detail

/// lambda = 1 / rho(K_T) with K_T = Gd_T o B, by power iteration on an n-point grid.
inline EigenResult lambda_via_spectral_radius(double T, int n = 400) {
    if (!(T > 0.0)) throw DomainError("lambda_via_spectral_radius: T must be > 0");
    if (n < 200) throw DomainError("lambda_via_spectral_radius: n must be >= 200");
    const auto a = detail::power_radius(T, n);
    const auto b = detail::power_radius(T, 2 * n);
    const double la = 1.0 / a.rho, lb = 1.0 / b.rho;
    EigenResult r;
    r.lambda = lb + (lb - la) / 3.0;  // Richardson, second order in the grid step
    r.method = EigenMethod::SpectralRadius;
    r.residual = std::abs(lb - la);
    r.bracket = {std::min(la, lb), std::max(la, lb)};
    r.variant = DirichletVariant::ZsinxeloM0;
    r.positive_iterates = a.positive && b.positive;
    r.iterations = b.iterations;
    return r;
}

/// First Dirichlet eigenvalue of z'' = -M z([t]), z(-T) = z(T) = 0.
inline EigenResult lambda1_zsinxelo(double T) { return dirichlet_eig_m0(T, T); }

/// Closed form of lambda^{s0} for T <= 1 and 0 < m < (pi/2T)^2.
inline double lambda_closed_Tle1(double m, double T, double s0) {
    if (!(T > 0.0 && T <= 1.0)) throw DomainError("lambda_closed_Tle1: T must be in (0,1]");
    if (!(m > 0.0 && m < std::pow(std::numbers::pi / (2.0 * T), 2)))
        throw DomainError("lambda_closed_Tle1: m must be in (0, (pi/2T)^2)");
    if (!(s0 > 0.0 && s0 <= T)) throw DomainError("lambda_closed_Tle1: s0 must be in (0, T]");
    const double a = std::sqrt(m);
    if (s0 == T) return m / (-1.0 + 1.0 / std::cos(a * T));
    const double d = std::sinh(a * s0) * std::sin(a * T) / std::sinh(a * T) / std::cos(a * (s0 - T)) *
                         std::sinh(a * (s0 - T)) +
                     std::cos(a * s0) - 1.0;
    return m * (-1.0 / d - 1.0);
}

/// Tabulated closed-form expressions for lambda_1 with m = 0 (T in (0,1), (1,2), (2,3)).
inline double table_lambda1(double T) {
    using C = std::complex<double>;
    if (T > 0.0 && T < 1.0) return 2.0 / (T * T);
    if (T > 1.0 && T < 2.0)
        return (T * T * T - std::sqrt(-4.0 + 8.0 * T - 4.0 * T * T + std::pow(T, 4))) / (1.0 - 2.0 * T + T * T);
    if (T > 2.0 && T < 3.0) {
        const double P = 169 + T * (-364 + T * (288 + T * (-100 + 13 * T)));
        const double inner =
            std::pow(T - 2.0, 4) * (2305 - T * (7314 + T * (-9600 + T * (6680 + T * (-2558 + T * (446 + T * (25 + 3 * (-8 + T) * T)))))));
        const C delta = C(2413 + T * (-7530 + T * (9762 + T * (-6734 + T * (2607 + T * (-537 + 46 * T)))))) +
                        3.0 * std::sqrt(3.0) * std::sqrt(C(inner));
        const C cr = std::pow(delta, 1.0 / 3.0);
        const C i(0.0, 1.0);
        const C val = 208.0 + 32.0 * T * (-7.0 + 2.0 * T) - 8.0 * i * (-i + std::sqrt(3.0)) * P / cr +
                      8.0 * i * (i + std::sqrt(3.0)) * cr;
        return (val / (24.0 * (T - 2.0) * (T - 2.0))).real();
    }
    throw DomainError("table_lambda1: T outside the tabulated intervals");
}

/// The 1 < T < 2 row with T^2 in the numerator, the root of
/// M^2 (T-1)^2 - 2 M T^2 + 4 = 0 that the determinant method produces.
inline double table_lambda1_corrected(double T) {
    if (!(T > 1.0 && T < 2.0)) return table_lambda1(T);
    return (T * T - std::sqrt(-4.0 + 8.0 * T - 4.0 * T * T + std::pow(T, 4))) / (1.0 - 2.0 * T + T * T);
}

namespace detail {

/// Chebyshev-Gauss-Lobatto nodes on [-1, 1] (ascending) and the first
/// derivative matrix.
struct Cheb {
    Eigen::VectorXd x;
    Eigen::MatrixXd D;
};

inline Cheb cheb(int N) {
    Cheb c;
    c.x.resize(N + 1);
    for (int j = 0; j <= N; ++j) c.x[j] = -std::cos(std::numbers::pi * j / N);
    c.D.resize(N + 1, N + 1);
    auto w = [N](int j) { return ((j == 0 || j == N) ? 2.0 : 1.0) * (j % 2 ? -1.0 : 1.0); };
    for (int i = 0; i <= N; ++i) {
        double diag = 0.0;
        for (int j = 0; j <= N; ++j) {
            if (i == j) continue;
            c.D(i, j) = w(i) / w(j) / (c.x[i] - c.x[j]);
            diag -= c.D(i, j);
        }
        c.D(i, i) = diag;
    }
    return c;
}

/// Collocation of v'' + m v(-t) + M v([t]) = 0 on the circle cut at s0:
/// returns A0 (M = 0 part), E (coefficient of M) and R (coefficient of m).
struct Collocation {
    CircleLayout L;
    int N = 0;
    Eigen::MatrixXd D2part, R, E;  // full system at (m, M) is D2part + m R + M E
    std::vector<std::size_t> node_cols;  // column of v(k) per label
    std::vector<int> labels;
};

inline Collocation build_collocation(double T, double s0, int N) {
    Collocation c;
    c.N = N;
    c.L = make_layout(T, {s0, -s0, 0.0});
    c.labels = node_labels(T);
    const std::size_t P = c.L.pieces();
    const std::size_t n = P * (N + 1);
    const Cheb ch = cheb(N);
    const Eigen::MatrixXd D2 = ch.D * ch.D;
    c.D2part = Eigen::MatrixXd::Zero(n, n);
    c.R = Eigen::MatrixXd::Zero(n, n);
    c.E = Eigen::MatrixXd::Zero(n, n);
    auto col = [N](std::size_t p, int j) { return p * (N + 1) + j; };

    for (int k : c.labels) {
        std::size_t idx = n;
        for (std::size_t p = 0; p < P; ++p) {
            if (k >= 0 && same_point(c.L.lo(p), k)) idx = col(p, 0);
            if (k < 0 && same_point(c.L.hi(p), k)) idx = col(p, N);
        }
        if (idx == n) throw DomainError("collocation: node not found");
        c.node_cols.push_back(idx);
    }

    std::size_t row = 0;
    for (std::size_t p = 0; p < P; ++p) {
        const double h = c.L.hi(p) - c.L.lo(p);
        const double scale = 4.0 / (h * h);
        const std::size_t mirror = P - 1 - p;
        const std::size_t kcol = c.node_cols[std::find(c.labels.begin(), c.labels.end(), c.L.label(p)) - c.labels.begin()];
        for (int j = 1; j < N; ++j, ++row) {
            for (int q = 0; q <= N; ++q) c.D2part(row, col(p, q)) = scale * D2(j, q);
            c.R(row, col(mirror, N - j)) += 1.0;
            c.E(row, kcol) += 1.0;
        }
    }
    for (std::size_t jn = 0; jn < P; ++jn) {
        const std::size_t left = jn, right = (jn + 1) % P;
        const double at = c.L.hi(left);
        const bool cut = same_point(at, s0) || (same_point(s0, T) && right == 0);
        if (cut) {
            c.D2part(row++, col(left, N)) = 1.0;
            c.D2part(row++, col(right, 0)) = 1.0;
        } else {
            c.D2part(row, col(left, N)) = 1.0;
            c.D2part(row++, col(right, 0)) = -1.0;
            const double sl = 2.0 / (c.L.hi(left) - c.L.lo(left));
            const double sr = 2.0 / (c.L.hi(right) - c.L.lo(right));
            for (int q = 0; q <= N; ++q) {
                c.D2part(row, col(left, q)) += sl * ch.D(N, q);
                c.D2part(row, col(right, q)) -= sr * ch.D(0, q);
            }
            ++row;
        }
    }
    return c;
}

/// Smallest positive M with det(A0 + M E) = 0, through the K x K reduction
/// det(I - M Q), Q = -Sel A0^{-1} Ecols.
inline std::pair<double, double> general_root(const Collocation& c, double m, double upper,
                                              std::pair<double, double>& bracket) {
    const Eigen::MatrixXd A0 = c.D2part + m * c.R;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A0);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A0);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 1e-13 * sv(0)))
        throw NonUniqueSolution("dirichlet_eig_general: reflection-only operator is singular at this m");
    const std::size_t K = c.labels.size();
    Eigen::MatrixXd Ecols(A0.rows(), K);
    for (std::size_t k = 0; k < K; ++k) Ecols.col(k) = c.E.col(c.node_cols[k]);
    const Eigen::MatrixXd Z = lu.solve(Ecols);
    Eigen::MatrixXd Q(K, K);
    for (std::size_t k = 0; k < K; ++k) Q.row(k) = -Z.row(c.node_cols[k]);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(K, K);
    auto sgn = [&](double M) { return sign_logdet(I - M * Q).first; };
    const auto br = first_sign_change(sgn, 1e-3, upper, kScanPoints);
    if (!br) throw NotFound("dirichlet_eig_general: no positive root below " + std::to_string(upper));
    bracket = *br;
    const double M = refine_sign_change(sgn, br->first, br->second);
    return {M, null_residual(A0 + M * c.E)};
}

}  // namespace detail

/// First Dirichlet eigenvalue in M for m >= 0 by piecewise Chebyshev collocation.
/// The ReflectionOnly variant drops the M term and solves for the eigenvalue in m.
inline EigenResult dirichlet_eig_general(double m, double T, double s0, int n = 24,
                                         DirichletVariant variant = DirichletVariant::NonIntegerS0) {
    if (n < 4) throw DomainError("dirichlet_eig_general: n must be >= 4");
    EigenResult r;
    r.method = EigenMethod::DeterminantRoot;
    if (variant == DirichletVariant::ReflectionOnly) {
        if (!(T > 0.0)) throw DomainError("dirichlet_eig_general: T must be > 0");
        const auto c = detail::build_collocation(T, T, n);
        auto sgn = [&](double mm) { return detail::sign_logdet(c.D2part + mm * c.R).first; };
        const double upper = detail::scan_upper(T);
        const auto br = detail::first_sign_change(sgn, 1e-3, upper, detail::kScanPoints);
        if (!br) throw NotFound("dirichlet_eig_general: no positive root in m");
        r.lambda = detail::refine_sign_change(sgn, br->first, br->second);
        r.bracket = *br;
        r.residual = detail::null_residual(c.D2part + r.lambda * c.R);
        r.variant = variant;
        return r;
    }
    const DirichletProblem prob = make_dirichlet_problem(m, T, s0);
    r.variant = prob.variant;
    const double upper = detail::scan_upper(T);
    const auto c = detail::build_collocation(T, s0, n);
    const auto [M, res] = detail::general_root(c, m, upper, r.bracket);
    r.lambda = M;
    r.residual = res;
    return r;
}

/// Richardson-free convergence check: the same root at n and n + 8 nodes per piece.
inline double dirichlet_general_refinement_gap(double m, double T, double s0, int n = 24) {
    return std::abs(dirichlet_eig_general(m, T, s0, n).lambda - dirichlet_eig_general(m, T, s0, n + 8).lambda);
}

/// s0 grid on [0, T] with exact integers where the grid hits them.
inline std::vector<double> s0_grid(double T, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) {
        double s = n == 1 ? T : T * i / (n - 1);
        if (std::abs(s - std::round(s)) < 1e-12) s = std::round(s);
        g[i] = s;
    }
    return g;
}

}  // namespace greens
