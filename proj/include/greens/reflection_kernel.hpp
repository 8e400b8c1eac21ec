#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "greens/errors.hpp"
#include "greens/numerics.hpp"
#include "greens/quadrature.hpp"

namespace greens {

/// Which symmetry carries (t, s) onto the canonical wedge t >= |s|.
enum class TriangleRegion {
    LowerTriangle,        // identity
    Transposed,           // (t, s) -> (s, t)
    Reflected,            // (t, s) -> (-t, -s)
    ReflectedTransposed,  // (t, s) -> (-s, -t)
};

struct TriangleCoords {
    double t = 0.0;
    double s = 0.0;
    double canonical_t = 0.0;
    double canonical_s = 0.0;
    TriangleRegion region = TriangleRegion::LowerTriangle;

    /// Undo the recorded symmetry on a canonical pair.
    static std::pair<double, double> apply(TriangleRegion region, double x, double y) {
        switch (region) {
            case TriangleRegion::LowerTriangle: return {x, y};
            case TriangleRegion::Transposed: return {y, x};
            case TriangleRegion::Reflected: return {-x, -y};
            case TriangleRegion::ReflectedTransposed: return {-y, -x};
        }
        return {x, y};
    }
};

namespace detail {

inline double domain_slack(double T) { return 1e-12 * std::max(1.0, T); }

inline double clamp_to(double x, double T) { return std::min(T, std::max(-T, x)); }

inline void check_square(double t, double s, double T, const char* who) {
    const double lim = T + domain_slack(T);
    if (!(std::abs(t) <= lim) || !(std::abs(s) <= lim))
        throw DomainError(std::string(who) + ": point outside [-T,T]^2");
}

/// Wedge choice with an explicit tie-break on the diagonal t == s, where the
/// t-derivative is discontinuous. diagonal_side > 0 picks the limit t -> s^+.
inline TriangleRegion wedge_of(double t, double s, int diagonal_side) {
    if (t == s && diagonal_side != 0) {
        if (diagonal_side > 0) return s >= 0.0 ? TriangleRegion::LowerTriangle
                                               : TriangleRegion::ReflectedTransposed;
        return s >= 0.0 ? TriangleRegion::Transposed : TriangleRegion::Reflected;
    }
    if (t >= std::abs(s)) return TriangleRegion::LowerTriangle;
    if (s >= std::abs(t)) return TriangleRegion::Transposed;
    if (-t >= std::abs(s)) return TriangleRegion::Reflected;
    return TriangleRegion::ReflectedTransposed;
}

}  // namespace detail

/// Maps (t, s) onto the wedge -t <= s <= t using only G(t,s) = G(s,t) and
/// G(t,s) = G(-t,-s).
inline TriangleCoords symmetry_reduce(double t, double s, double T) {
    if (!(T > 0.0)) throw DomainError("symmetry_reduce: T must be > 0");
    detail::check_square(t, s, T, "symmetry_reduce");
    TriangleCoords c{t, s, t, s, detail::wedge_of(t, s, 0)};
    // The inverse of each symmetry is itself.
    std::tie(c.canonical_t, c.canonical_s) = TriangleCoords::apply(c.region, t, s);
    return c;
}

enum class Side { Left, Right };

enum class GSign {
    StrictlyPositive,
    PositiveVanishingAtP,
    StrictlyNegative,
    NegativeVanishingAtP1,
    ChangesSign,
};

inline const char* to_string(GSign s) {
    switch (s) {
        case GSign::StrictlyPositive: return "StrictlyPositive";
        case GSign::PositiveVanishingAtP: return "PositiveVanishingAtP";
        case GSign::StrictlyNegative: return "StrictlyNegative";
        case GSign::NegativeVanishingAtP1: return "NegativeVanishingAtP1";
        case GSign::ChangesSign: return "ChangesSign";
    }
    return "?";
}

/// Green's function of v'' + m v(-t) = sigma with periodic conditions on
/// [-T, T]. Immutable; all evaluation is const and thread-safe.
class ReflectionKernel {
public:
    static constexpr double kResonanceRelTol = 1e-9;

    ReflectionKernel(double m, double T) : m_(m), T_(T) {
        if (!std::isfinite(m) || !std::isfinite(T)) throw DomainError("ReflectionKernel: non-finite parameter");
        if (!(T > 0.0)) throw DomainError("ReflectionKernel: T must be > 0");
        if (m == 0.0) throw DomainError("ReflectionKernel: m = 0 has no unique solution");
        alpha_ = std::sqrt(std::abs(m));
        resonant_ = is_resonant(m, T);
        if (!resonant_) {
            csc_ = 1.0 / std::sin(alpha_ * T);
            csch_ = 1.0 / std::sinh(alpha_ * T);
        }
    }

    /// True iff |m| = (k pi / T)^2 for an integer k >= 1 within relative 1e-9.
    static bool is_resonant(double m, double T) {
        if (m == 0.0) return true;
        const double root = std::sqrt(std::abs(m)) * T / std::numbers::pi;
        const double k = std::round(root);
        if (k < 1.0) return false;
        const double lam = std::pow(k * std::numbers::pi / T, 2);
        return std::abs(std::abs(m) - lam) < kResonanceRelTol * lam;
    }

    double m() const noexcept { return m_; }
    double T() const noexcept { return T_; }
    double alpha() const noexcept { return alpha_; }
    bool resonant() const noexcept { return resonant_; }

    double operator()(double t, double s) const { return eval(t, s); }

    double eval(double t, double s) const {
        require_usable();
        detail::check_square(t, s, T_, "eval_G");
        const auto region = detail::wedge_of(t, s, 0);
        const auto [x, y] = TriangleCoords::apply(region, t, s);
        return canonical(x, y);
    }

    /// One-sided dG/dt on the diagonal; `side` is the side from which s
    /// approaches t (Left: s -> t^-, Right: s -> t^+). Off the diagonal both agree.
    double dt(double t, double s, Side side) const {
        require_usable();
        detail::check_square(t, s, T_, "eval_G_dt");
        const auto region = detail::wedge_of(t, s, side == Side::Left ? 1 : -1);
        const auto [x, y] = TriangleCoords::apply(region, t, s);
        switch (region) {
            case TriangleRegion::LowerTriangle: return canonical_dx(x, y);
            case TriangleRegion::Transposed: return canonical_dy(x, y);
            case TriangleRegion::Reflected: return -canonical_dx(x, y);
            case TriangleRegion::ReflectedTransposed: return -canonical_dy(x, y);
        }
        return 0.0;
    }

    /// Exact integral of G(t, .) over [a, b] from the closed-form
    /// antiderivatives, split where the wedge changes.
    double integral_s(double t, double a, double b) const {
        require_usable();
        detail::check_square(t, a, T_, "integral_s");
        detail::check_square(t, b, T_, "integral_s");
        if (a > b) return -integral_s(t, b, a);
        const double at = std::abs(t);
        double total = 0.0;
        auto piece = [&](double lo, double hi, auto&& anti) {
            lo = std::max(lo, a);
            hi = std::min(hi, b);
            if (hi > lo) total += anti(hi) - anti(lo);
        };
        // bottom wedge s <= -|t|: G = Gc(-s, -t)
        piece(-T_, -at, [&](double s) { return -anti_x(-s, -t); });
        // middle |s| <= |t|
        if (t >= 0.0)
            piece(-at, at, [&](double s) { return anti_y(t, s); });
        else
            piece(-at, at, [&](double s) { return -anti_y(-t, -s); });
        // top wedge s >= |t|: G = Gc(s, t)
        piece(at, T_, [&](double s) { return anti_x(s, t); });
        return total;
    }

    /// Formula on the canonical wedge x >= |y|.
    double canonical(double x, double y) const {
        const double a = alpha_;
        if (m_ > 0.0)
            return (std::cos(a * y) * csc_ * std::cos(a * (x - T_)) +
                    std::sinh(a * y) * csch_ * std::sinh(a * (x - T_))) /
                   (2.0 * a);
        return (std::sin(a * y) * csc_ * std::sin(a * (x - T_)) -
                std::cosh(a * y) * csch_ * std::cosh(a * (x - T_))) /
               (2.0 * a);
    }

private:
    void require_usable() const {
        if (resonant_)
            throw ResonanceError("reflection kernel is resonant: |m| = (k pi / T)^2");
    }

    double canonical_dx(double x, double y) const {
        const double a = alpha_;
        if (m_ > 0.0)
            return 0.5 * (-std::cos(a * y) * csc_ * std::sin(a * (x - T_)) +
                          std::sinh(a * y) * csch_ * std::cosh(a * (x - T_)));
        return 0.5 * (std::sin(a * y) * csc_ * std::cos(a * (x - T_)) -
                      std::cosh(a * y) * csch_ * std::sinh(a * (x - T_)));
    }

    double canonical_dy(double x, double y) const {
        const double a = alpha_;
        if (m_ > 0.0)
            return 0.5 * (-std::sin(a * y) * csc_ * std::cos(a * (x - T_)) +
                          std::cosh(a * y) * csch_ * std::sinh(a * (x - T_)));
        return 0.5 * (std::cos(a * y) * csc_ * std::sin(a * (x - T_)) -
                      std::sinh(a * y) * csch_ * std::cosh(a * (x - T_)));
    }

    // Antiderivatives of the canonical formula in its second / first argument.
    double anti_y(double x, double y) const {
        const double a = alpha_;
        const double a2 = 2.0 * a * a;
        if (m_ > 0.0)
            return (std::sin(a * y) * csc_ * std::cos(a * (x - T_)) +
                    std::cosh(a * y) * csch_ * std::sinh(a * (x - T_))) /
                   a2;
        return (-std::cos(a * y) * csc_ * std::sin(a * (x - T_)) -
                std::sinh(a * y) * csch_ * std::cosh(a * (x - T_))) /
               a2;
    }

    double anti_x(double x, double y) const {
        const double a = alpha_;
        const double a2 = 2.0 * a * a;
        if (m_ > 0.0)
            return (std::cos(a * y) * csc_ * std::sin(a * (x - T_)) +
                    std::sinh(a * y) * csch_ * std::cosh(a * (x - T_))) /
                   a2;
        return (-std::sin(a * y) * csc_ * std::cos(a * (x - T_)) -
                std::cosh(a * y) * csch_ * std::sinh(a * (x - T_))) /
               a2;
    }

    double m_;
    double T_;
    double alpha_ = 0.0;
    bool resonant_ = false;
    double csc_ = 0.0;
    double csch_ = 0.0;
};

inline double eval_G(const ReflectionKernel& k, double t, double s) { return k.eval(t, s); }

inline double eval_G_dt(const ReflectionKernel& k, double t, double s, Side side) {
    return k.dt(t, s, side);
}

/// Quadrature of G(t, .) over [-T, T] with the kinks at s = +-t split out.
inline double integral_G_over_s(const ReflectionKernel& k, double t, const QuadConfig& quad = {}) {
    if (k.resonant()) throw ResonanceError("integral_G_over_s: resonant kernel");
    const double T = k.T();
    const double tc = detail::clamp_to(t, T);
    return integrate([&](double s) { return k.eval(tc, s); }, -T, T, BreakpointSet{tc, -tc}, quad);
}

/// Smallest positive root of tan(c) = coth(c).
inline double solve_cbar() {
    auto h = [](double c) { return std::tan(c) * std::tanh(c) - 1.0; };
    double c = bisect_root(h, 0.75, 1.2, 1e-6);
    for (int i = 0; i < 20; ++i) {
        const double th = std::tanh(c), tn = std::tan(c);
        const double dh = (1.0 + tn * tn) * th + tn * (1.0 - th * th);
        const double step = h(c) / dh;
        c -= step;
        if (std::abs(step) < 1e-15) break;
    }
    return c;
}

/// Sign of G_m on [-T,T]^2 by comparing m with 0, (pi/2T)^2 and -(2 cbar/T)^2.
inline GSign sign_classification_G(const ReflectionKernel& k) {
    if (k.resonant()) throw ResonanceError("sign_classification_G: resonant kernel");
    constexpr double tol = ReflectionKernel::kResonanceRelTol;
    const double T = k.T(), m = k.m();
    if (m > 0.0) {
        const double upper = std::pow(std::numbers::pi / (2.0 * T), 2);
        if (std::abs(m - upper) <= tol * upper) return GSign::PositiveVanishingAtP;
        return m < upper ? GSign::StrictlyPositive : GSign::ChangesSign;
    }
    const double lower = -std::pow(2.0 * solve_cbar() / T, 2);
    if (std::abs(m - lower) <= tol * std::abs(lower)) return GSign::NegativeVanishingAtP1;
    return m > lower ? GSign::StrictlyNegative : GSign::ChangesSign;
}

}  // namespace greens
