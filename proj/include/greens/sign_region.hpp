#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "greens/composite_kernel.hpp"
#include "greens/errors.hpp"
#include "greens/numerics.hpp"
#include "greens/parallel.hpp"
#include "greens/quadrature.hpp"
#include "greens/reflection_kernel.hpp"

namespace greens {

enum class RegionSign { Positive, Negative };
enum class ExtremumKind { MinOfPositive, MaxOfNegative };
enum class RegionMethod { Bisection, ClosedForm, CandidatePoints };

inline const char* to_string(RegionSign s) { return s == RegionSign::Positive ? "Positive" : "Negative"; }

inline const char* to_string(RegionMethod m) {
    switch (m) {
        case RegionMethod::Bisection: return "Bisection";
        case RegionMethod::ClosedForm: return "ClosedForm";
        case RegionMethod::CandidatePoints: return "CandidatePoints";
    }
    return "?";
}

using Point2 = std::pair<double, double>;

struct RegionSample {
    double m = 0.0;
    std::optional<double> M_pos_upper;
    std::optional<double> M_neg_lower;
    RegionMethod method = RegionMethod::Bisection;
    int grid_n = 0;
    std::string pos_error;
    std::string neg_error;
};

struct ExtremumRecord {
    double m = 0.0;
    double M = 0.0;
    Point2 location{0.0, 0.0};
    ExtremumKind kind = ExtremumKind::MinOfPositive;
};

struct MinMax {
    double min = 0.0;
    Point2 argmin{0.0, 0.0};
    double max = 0.0;
    Point2 argmax{0.0, 0.0};
};

/// Points where the extremum of a constant-sign H is expected.
inline std::vector<Point2> extremum_candidates(double m, double T, ExtremumKind kind, int diagonal_n = 21) {
    std::vector<Point2> pts;
    if (kind == ExtremumKind::MinOfPositive) {
        if (m >= 0.0) {
            for (int i = 0; i < diagonal_n; ++i) {
                const double s = -T + 2.0 * T * i / (diagonal_n - 1);
                pts.emplace_back(s, s);
            }
            return pts;
        }
        pts = {{0.0, 0.0}, {0.75 * T, 0.75 * T}, {T, T}};
    } else {
        pts = {{T, 0.0}};
        if (m < 0.0) {
            pts.emplace_back(0.0, 0.0);
            pts.emplace_back(0.75 * T, 0.75 * T);
            pts.emplace_back(0.5 * T, -0.5 * T);
        }
    }
    for (int k = -floor_trunc(T); k <= floor_trunc(T); ++k) {
        pts.emplace_back(T, k);
        pts.emplace_back(0.0, k);
    }
    return pts;
}

namespace detail {

inline std::vector<double> grid_with_integers(double lo, double hi, int n) {
    std::vector<double> g;
    g.reserve(n + 8);
    for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
    for (int k = static_cast<int>(std::ceil(lo)); k <= static_cast<int>(std::floor(hi)); ++k) g.push_back(k);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }), g.end());
    return g;
}

/// Minimizes `f` near `p`: golden-section along the diagonal and anti-diagonal
/// through p and alternating coordinate sweeps, all restricted to the square.
template <class F>
std::pair<Point2, double> polish_min(F&& f, Point2 p, double fp, double T, double cell) {
    auto clampT = [T](double x) { return std::clamp(x, -T, T); };
    auto take = [&](Point2 q) {
        const double v = f(q.first, q.second);
        if (v < fp) fp = v, p = q;
    };
    constexpr double tol = 1e-7;
    if (std::abs(p.first - p.second) < 0.5 * cell) {
        const double lo = clampT(p.first - 2 * cell), hi = clampT(p.first + 2 * cell);
        const auto r = golden_minimize([&](double x) { return f(x, x); }, lo, hi, tol);
        take({r.x, r.x});
    }
    if (std::abs(p.first + p.second) < 0.5 * cell) {
        const double lo = clampT(p.first - 2 * cell), hi = clampT(p.first + 2 * cell);
        const auto r = golden_minimize([&](double x) { return f(x, -x); }, lo, hi, tol);
        take({r.x, -r.x});
    }
    for (int sweep = 0; sweep < 4; ++sweep) {
        const Point2 before = p;
        {
            const double s = p.second;
            const auto r = golden_minimize([&](double x) { return f(x, s); }, clampT(p.first - cell),
                                           clampT(p.first + cell), tol);
            take({r.x, s});
        }
        {
            const double t = p.first;
            const auto r = golden_minimize([&](double y) { return f(t, y); }, clampT(p.second - cell),
                                           clampT(p.second + cell), tol);
            take({t, r.x});
        }
        if (before == p) break;
    }
    return {p, fp};
}

}  // namespace detail

/// Extrema of H over the square: tensor grid (s restricted to [0, T] using
/// H(t,s) = H(-t,-s)), explicit candidates, then local golden-section polish.
inline MinMax min_max_H(const CompositeKernel& k, int grid_n = 101) {
    if (grid_n < 41) throw DomainError("min_max_H: grid_n must be >= 41");
    const double T = k.T();
    const auto ts = detail::grid_with_integers(-T, T, grid_n);
    const auto ss = detail::grid_with_integers(0.0, T, (grid_n + 1) / 2);
    const Eigen::MatrixXd H = k.eval_grid(ts, ss);

    MinMax r;
    r.min = std::numeric_limits<double>::infinity();
    r.max = -r.min;
    for (Eigen::Index i = 0; i < H.rows(); ++i)
        for (Eigen::Index j = 0; j < H.cols(); ++j) {
            const double v = H(i, j);
            if (v < r.min) r.min = v, r.argmin = {ts[i], ss[j]};
            if (v > r.max) r.max = v, r.argmax = {ts[i], ss[j]};
        }
    const double m = k.m();
    for (auto kind : {ExtremumKind::MinOfPositive, ExtremumKind::MaxOfNegative})
        for (const auto& [t, s] : extremum_candidates(m, T, kind)) {
            const double v = k.eval(t, s);
            if (v < r.min) r.min = v, r.argmin = {t, s};
            if (v > r.max) r.max = v, r.argmax = {t, s};
        }

    const double cell = 2.0 * T / (grid_n - 1);
    auto Hf = [&](double t, double s) { return k.eval(t, s); };
    auto negH = [&](double t, double s) { return -k.eval(t, s); };
    std::tie(r.argmin, r.min) = detail::polish_min(Hf, r.argmin, r.min, T, cell);
    auto [pmax, vmax] = detail::polish_min(negH, r.argmax, -r.max, T, cell);
    r.argmax = pmax;
    r.max = -vmax;
    return r;
}

inline bool has_sign(const CompositeKernel& k, RegionSign sign, int grid_n = 101) {
    const MinMax mm = min_max_H(k, grid_n);
    return sign == RegionSign::Positive ? mm.min > 0.0 : mm.max < 0.0;
}

inline std::pair<double, double> default_bracket(double m, double T, RegionSign sign) {
    const double span = 50.0 / (T * T);
    if (sign == RegionSign::Positive) return {-m + 1e-6, -m + span};
    return {-m - 1e-6, -m - span};
}

struct BisectConfig {
    BisectConfig() = default;

    int grid_n = 101;
    double tol = 1e-4;
    QuadConfig quad{};
};

/// Boundary of the constant-sign region along M for fixed m. `bracket.first`
/// must lie inside the region and `bracket.second` outside.
inline double critical_M_bisect(double m, double T, RegionSign sign, std::pair<double, double> bracket,
                                const BisectConfig& cfg = {}) {
    auto inside = [&](double M) {
        try {
            return has_sign(make_kernel(m, M, T, cfg.quad), sign, cfg.grid_n);
        } catch (const NonUniqueSolution&) {
            return false;
        } catch (const ResonanceError&) {
            return false;
        }
    };
    const auto [in, out] = bracket;
    if (!inside(in))
        throw BracketError("critical_M_bisect: H has no constant sign at the inner bracket end");
    if (inside(out))
        throw BracketError("critical_M_bisect: H keeps its sign at the outer bracket end");
    const auto r = bisect_predicate(inside, in, out, cfg.tol);
    return 0.5 * (r.first + r.second);
}

inline double critical_M_bisect(double m, double T, RegionSign sign, const BisectConfig& cfg = {}) {
    return critical_M_bisect(m, T, sign, default_bracket(m, T, sign), cfg);
}

namespace detail {

inline double csch(double x) { return 1.0 / std::sinh(x); }
inline double sech(double x) { return 1.0 / std::cosh(x); }
inline double coth(double x) { return 1.0 / std::tanh(x); }

/// Shared pieces of F(m, T) as functions of x = sqrt(-m) T.
inline double F_denominator(double x) {
    return coth(x / 4) - csch(x / 4) * sech(x / 2) + std::tan(x / 4) + std::tan(x / 2) + std::tanh(x / 2);
}
inline double F_ratio(double x) { return csch(x / 4) * sech(x / 2) / F_denominator(x); }

/// Positive-boundary branches divided by m.
inline double pos_cosh_branch(double x) { return std::cosh(x) / (1.0 - std::cosh(x)); }
inline double pos_F_branch(double x) { return -1.0 - F_ratio(x); }

/// Negative-boundary branches divided by m.
inline double neg_cosh_branch(double x) { return 1.0 / (std::cosh(x) - 1.0); }
inline double neg_tan_branch(double x) {
    const double h = x / 2;
    return (coth(h) - std::tan(h)) / (-coth(h) + csch(h) + std::tan(h));
}

/// First root closest to zero of g(m) = 0 for m in (-10/T^2, -0.1/T^2),
/// returned as m T^2.
template <class G>
double first_branch_root(G&& g, double T) {
    const double lo = -10.0, hi = -0.1;
    constexpr int steps = 990;
    double prev_a = hi, prev_v = g(hi / (T * T));
    for (int i = 1; i <= steps; ++i) {
        const double a = hi + (lo - hi) * i / steps;
        const double v = g(a / (T * T));
        if (std::isfinite(v) && std::isfinite(prev_v) && (v < 0.0) != (prev_v < 0.0)) {
            const double root =
                bisect_root([&](double aa) { return g(aa / (T * T)); }, a, prev_a, 1e-14, 400);
            // reject sign changes across poles
            if (std::abs(g(root / (T * T))) < 1e-8) return root;
        }
        prev_a = a;
        prev_v = v;
    }
    throw NotFound("branch root not found in (-10, -0.1)");
}

}  // namespace detail

/// alpha_2 = m T^2 where the F branch and the cosh branch of the positive boundary meet.
inline double solve_alpha2(double T = 1.0) {
    return detail::first_branch_root(
        [T](double m) {
            const double x = std::sqrt(-m) * T;
            return detail::pos_F_branch(x) - detail::pos_cosh_branch(x);
        },
        T);
}

/// alpha_3 = m T^2 where the two negative-boundary branches meet.
inline double solve_alpha3(double T = 1.0) {
    return detail::first_branch_root(
        [T](double m) {
            const double x = std::sqrt(-m) * T;
            return detail::neg_cosh_branch(x) - detail::neg_tan_branch(x);
        },
        T);
}

/// Residual of the defining equation of alpha_2 (or alpha_3) at a = m T^2.
inline double alpha2_residual(double a) {
    const double x = std::sqrt(-a);
    return detail::pos_F_branch(x) - detail::pos_cosh_branch(x);
}
inline double alpha3_residual(double a) {
    const double x = std::sqrt(-a);
    return detail::neg_cosh_branch(x) - detail::neg_tan_branch(x);
}

/// Closed-form boundary of the constant-sign region for T <= 1 and
/// m in (-(pi/T)^2, (pi/2T)^2).
inline double region_boundary_closed_Tle1(double m, double T, RegionSign sign) {
    if (!(T > 0.0 && T <= 1.0)) throw DomainError("region_boundary_closed_Tle1: T must be in (0,1]");
    const double upper = std::pow(std::numbers::pi / (2.0 * T), 2);
    const double lower = -std::pow(std::numbers::pi / T, 2);
    if (!(m > lower && m < upper)) throw DomainError("region_boundary_closed_Tle1: m outside covered range");
    if (m == 0.0) return (sign == RegionSign::Positive ? 2.0 : -2.0) / (T * T);
    if (m > 0.0) {
        const double c = std::cos(std::sqrt(m) * T);
        return sign == RegionSign::Positive ? m / (1.0 / c - 1.0) : m / (c - 1.0);
    }
    const double x = std::sqrt(-m) * T;
    if (sign == RegionSign::Positive) {
        static const double a2 = solve_alpha2();
        return m * (m * T * T >= a2 ? detail::pos_cosh_branch(x) : detail::pos_F_branch(x));
    }
    static const double a3 = solve_alpha3();
    return m * (m * T * T >= a3 ? detail::neg_cosh_branch(x) : detail::neg_tan_branch(x));
}

/// G_m(t,s) / integral of G_m(t,r) H_{m,M0}([r],s) dr. Equals M0 exactly where
/// H_{m,M0}(t,s) vanishes.
inline double tbar_operator(const CompositeKernel& h0, double t, double s) {
    if (!h0.g_base()) throw DomainError("tbar_operator: requires m != 0");
    const ReflectionKernel& g = *h0.g_base();
    const auto& part = h0.partition();
    double denom = 0.0;
    for (std::size_t k = 0; k < part.size(); ++k)
        denom += g.integral_s(t, part.intervals[k].first, part.intervals[k].second) * h0.eval(part.labels[k], s);
    if (std::abs(denom) < 1e-300) throw DomainError("tbar_operator: vanishing denominator");
    return g.eval(t, s) / denom;
}

inline double tbar_operator(double m, double M0, double T, double t, double s, const QuadConfig& cfg = {}) {
    return tbar_operator(make_kernel(m, M0, T, cfg), t, s);
}

/// Boundary obtained by assuming the extremum sits at one of the candidate
/// points: the first M (moving away from M = -m) at which H vanishes there.
inline std::optional<double> candidate_point_boundary(double m, double T, RegionSign sign,
                                                      const QuadConfig& cfg = {}) {
    const auto kind = sign == RegionSign::Positive ? ExtremumKind::MinOfPositive : ExtremumKind::MaxOfNegative;
    std::vector<Point2> pts;
    if (sign == RegionSign::Positive)
        pts = m >= 0.0 ? std::vector<Point2>{{T, T}, {0.0, 0.0}} : std::vector<Point2>{{0.0, 0.0}, {0.75 * T, 0.75 * T}};
    else
        pts = extremum_candidates(m, T, kind);
    const auto [in, out] = default_bracket(m, T, sign);
    constexpr int steps = 400;
    std::optional<double> best;
    for (const auto& [t, s] : pts) {
        auto h = [&](double M) { return make_kernel(m, M, T, cfg).eval(t, s); };
        double prev_M = in, prev_v = h(in);
        for (int i = 1; i <= steps; ++i) {
            const double M = in + (out - in) * i / steps;
            double v;
            try {
                v = h(M);
            } catch (const Error&) {
                continue;
            }
            if ((v > 0.0) != (prev_v > 0.0)) {
                const double root = bisect_root(h, prev_M, M, 1e-10);
                if (!best || std::abs(root + m) < std::abs(*best + m)) best = root;
                break;
            }
            prev_M = M;
            prev_v = v;
        }
    }
    return best;
}

struct ScanConfig {
    int grid_n = 101;
    double tol = 1e-4;
    int threads = 0;
    QuadConfig quad{};
};

/// Bisection boundaries of both regions for each m, computed in parallel and
/// returned in the order of m_grid. Per-sample failures are recorded.
inline std::vector<RegionSample> scan_region(const std::vector<double>& m_grid, double T, const ScanConfig& cfg = {}) {
    std::vector<RegionSample> out(m_grid.size());
    BisectConfig bc;
    bc.grid_n = cfg.grid_n;
    bc.tol = cfg.tol;
    bc.quad = cfg.quad;
    parallel_for(m_grid.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
        RegionSample r;
        r.m = m_grid[i];
        r.method = RegionMethod::Bisection;
        r.grid_n = cfg.grid_n;
        try {
            r.M_pos_upper = critical_M_bisect(r.m, T, RegionSign::Positive, bc);
        } catch (const Error& e) {
            r.pos_error = e.what();
        }
        try {
            r.M_neg_lower = critical_M_bisect(r.m, T, RegionSign::Negative, bc);
        } catch (const Error& e) {
            r.neg_error = e.what();
        }
        out[i] = std::move(r);
    });
    return out;
}

inline std::vector<RegionSample> closed_form_region(const std::vector<double>& m_grid, double T) {
    std::vector<RegionSample> out;
    for (double m : m_grid) {
        RegionSample r;
        r.m = m;
        r.method = RegionMethod::ClosedForm;
        try {
            r.M_pos_upper = region_boundary_closed_Tle1(m, T, RegionSign::Positive);
        } catch (const Error& e) {
            r.pos_error = e.what();
        }
        try {
            r.M_neg_lower = region_boundary_closed_Tle1(m, T, RegionSign::Negative);
        } catch (const Error& e) {
            r.neg_error = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

/// Necessary condition: a positive region needs m + M > 0, a negative one m + M < 0.
inline bool necessary_condition_ok(const RegionSample& r) {
    bool ok = true;
    if (r.M_pos_upper) ok = ok && r.m + *r.M_pos_upper > 0.0;
    if (r.M_neg_lower) ok = ok && r.m + *r.M_neg_lower < 0.0;
    return ok;
}

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

}  // namespace greens
