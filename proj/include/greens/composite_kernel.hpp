#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "greens/errors.hpp"
#include "greens/quadrature.hpp"
#include "greens/reflection_kernel.hpp"

namespace greens {

/// Preimages of [t] inside (-T, T), one per nonempty label.
struct IntervalPartition {
    double T = 0.0;
    std::vector<int> labels;
    std::vector<std::pair<double, double>> intervals;

    std::size_t size() const noexcept { return labels.size(); }

    /// Position of `label` in `labels`, or -1.
    int index_of(int label) const {
        auto it = std::find(labels.begin(), labels.end(), label);
        return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
    }
};

inline IntervalPartition build_partition(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("build_partition: T must be finite and > 0");
    IntervalPartition p;
    p.T = T;
    const int n = floor_trunc(T);
    for (int k = -n; k <= n; ++k) {
        double lo, hi;
        if (k == 0) {
            lo = std::max(-1.0, -T);
            hi = std::min(1.0, T);
        } else if (k > 0) {
            lo = k;
            hi = std::min(k + 1.0, T);
        } else {
            lo = std::max(k - 1.0, -T);
            hi = k;
        }
        if (hi > lo) {
            p.labels.push_back(k);
            p.intervals.emplace_back(lo, hi);
        }
    }
    return p;
}

enum class CompositeMode { MatrixConstruction, ClosedFormTle1, DirectM0 };

inline const char* to_string(CompositeMode m) {
    switch (m) {
        case CompositeMode::MatrixConstruction: return "MatrixConstruction";
        case CompositeMode::ClosedFormTle1: return "ClosedFormTle1";
        case CompositeMode::DirectM0: return "DirectM0";
    }
    return "?";
}

namespace detail {

/// Zero-mean periodic pseudo-Green's function of v'' on [-T, T]:
/// d^2/dt^2 g0 = delta(t - s) - 1/(2T).
inline double g0(double T, double t, double s) {
    const double d = t - s;
    return 0.5 * std::abs(d) - d * d / (4.0 * T) - T / 6.0;
}

/// Antiderivative of g0(t, .) in its second argument.
inline double g0_anti(double T, double t, double r) {
    const double d = r - t;
    return 0.25 * d * std::abs(d) - d * d * d / (12.0 * T) - T * r / 6.0;
}

inline constexpr double kSingularRcond = 1e-13;

}  // namespace detail

/// Green's function H_{m,M} of v'' + m v(-t) + M v([t]) = sigma, periodic on [-T, T].
///
/// Every mode has the separable form
///   H(t, s) = base(t, s) - sum_k b_k(t) w_k(s) + extra(s)
/// where base is G_m (or the pseudo-Green's function of v'' when m = 0) and
/// b_k(t) integrates base(t, .) over partition interval k.
class CompositeKernel {
public:
    double m() const noexcept { return m_; }
    double M() const noexcept { return M_; }
    double T() const noexcept { return T_; }
    CompositeMode mode() const noexcept { return mode_; }
    const IntervalPartition& partition() const noexcept { return part_; }
    const Eigen::MatrixXd& A() const noexcept { return A_; }
    double condition_number() const noexcept { return cond_; }
    const QuadConfig& quad() const noexcept { return quad_; }

    /// Base reflection kernel; absent for m = 0.
    const std::optional<ReflectionKernel>& g_base() const noexcept { return g_; }

    double base(double t, double s) const {
        if (mode_ == CompositeMode::DirectM0) return detail::g0(T_, t, s);
        return g_->eval(t, s);
    }

    /// b_k(t) = integral of base(t, .) over interval k.
    Eigen::VectorXd row(double t) const {
        const std::size_t K = part_.size();
        Eigen::VectorXd b(K);
        for (std::size_t k = 0; k < K; ++k) {
            const auto [lo, hi] = part_.intervals[k];
            if (mode_ == CompositeMode::DirectM0)
                b[k] = detail::g0_anti(T_, t, hi) - detail::g0_anti(T_, t, lo);
            else
                b[k] = g_->integral_s(t, lo, hi);
        }
        return b;
    }

    /// Coefficients w_k(s) paired with row(t), plus extra(s) in the last slot.
    Eigen::VectorXd column(double s) const {
        const std::size_t K = part_.size();
        Eigen::VectorXd w(K + 1);
        if (mode_ == CompositeMode::ClosedFormTle1) {
            w[0] = M_ / (m_ + M_) * g_->eval(0.0, s) * m_;  // b_0(t) = 1/m on (-T,T)
            w[1] = 0.0;
            return w;
        }
        Eigen::VectorXd rhs(solve_size_);
        for (std::size_t l = 0; l < K; ++l) rhs[l] = base(part_.labels[l], s);
        if (mode_ == CompositeMode::DirectM0) rhs[K] = 1.0;
        const Eigen::VectorXd x = lu_.solve(rhs);
        w.head(K) = M_ * x.head(K);
        w[K] = mode_ == CompositeMode::DirectM0 ? x[K] : 0.0;
        return w;
    }

    double eval_with(double t, double s, const Eigen::VectorXd& b, const Eigen::VectorXd& w) const {
        const std::size_t K = part_.size();
        return base(t, s) - b.dot(w.head(K)) + w[K];
    }

    double eval(double t, double s) const {
        detail::check_square(t, s, T_, "eval_H");
        if (mode_ == CompositeMode::ClosedFormTle1)
            return g_->eval(t, s) - M_ / (m_ + M_) * g_->eval(0.0, s);
        return eval_with(t, s, row(t), column(s));
    }

    double operator()(double t, double s) const { return eval(t, s); }

    /// H on the tensor grid ts x ss, reusing rows and columns.
    Eigen::MatrixXd eval_grid(const std::vector<double>& ts, const std::vector<double>& ss) const {
        const std::size_t K = part_.size();
        Eigen::MatrixXd B(ts.size(), K), W(K + 1, ss.size());
        for (std::size_t i = 0; i < ts.size(); ++i) B.row(i) = row(ts[i]).transpose();
        for (std::size_t j = 0; j < ss.size(); ++j) W.col(j) = column(ss[j]);
        Eigen::MatrixXd H = -B * W.topRows(K);
        for (std::size_t i = 0; i < ts.size(); ++i)
            for (std::size_t j = 0; j < ss.size(); ++j) H(i, j) += base(ts[i], ss[j]) + W(K, j);
        return H;
    }

    friend CompositeKernel build_H(double m, double M, double T, const QuadConfig& cfg);
    friend CompositeKernel build_H_m0(double M, double T);
    friend CompositeKernel build_H_closed_Tle1(double m, double M, double T);

private:
    CompositeKernel() = default;

    void factorize(const Eigen::MatrixXd& S) {
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(S);
        const auto& sv = svd.singularValues();
        const double smax = sv(0), smin = sv(sv.size() - 1);
        cond_ = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
        if (!(smin > detail::kSingularRcond * smax))
            throw NonUniqueSolution("composite kernel: linear system is singular (M is an eigenvalue)");
        lu_ = S.partialPivLu();
        solve_size_ = S.rows();
    }

    double m_ = 0.0, M_ = 0.0, T_ = 0.0;
    CompositeMode mode_ = CompositeMode::MatrixConstruction;
    IntervalPartition part_;
    std::optional<ReflectionKernel> g_;
    Eigen::MatrixXd A_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    Eigen::Index solve_size_ = 0;
    double cond_ = 1.0;
    QuadConfig quad_;
};

namespace detail {

inline void check_eigen_line(double m, double M) {
    if (std::abs(m + M) <= 1e-14 * std::max({1.0, std::abs(m), std::abs(M)}))
        throw NonUniqueSolution("composite kernel: M = -m is an eigenvalue curve");
}

}  // namespace detail

/// Matrix construction for m != 0: A_{lk} = delta_{lk} + M a_{lk},
/// a_{lk} = integral of G_m(l, .) over interval k.
inline CompositeKernel build_H(double m, double M, double T, const QuadConfig& cfg = {}) {
    if (m == 0.0) throw DomainError("build_H: m = 0 must use build_H_m0");
    if (!std::isfinite(M)) throw DomainError("build_H: M must be finite");
    cfg.validate();
    detail::check_eigen_line(m, M);
    CompositeKernel k;
    k.m_ = m;
    k.M_ = M;
    k.T_ = T;
    k.quad_ = cfg;
    k.mode_ = CompositeMode::MatrixConstruction;
    k.g_.emplace(m, T);
    if (k.g_->resonant()) throw ResonanceError("build_H: G_m is resonant");
    k.part_ = build_partition(T);
    const std::size_t K = k.part_.size();
    k.A_ = Eigen::MatrixXd::Identity(K, K);
    for (std::size_t l = 0; l < K; ++l) k.A_.row(l) += M * k.row(k.part_.labels[l]).transpose();
    k.factorize(k.A_);
    return k;
}

/// H = G_m(t,s) - M/(m+M) G_m(0,s), valid for T <= 1.
inline CompositeKernel build_H_closed_Tle1(double m, double M, double T) {
    if (!(T > 0.0 && T <= 1.0)) throw DomainError("closed form requires T in (0,1]");
    if (m == 0.0) throw DomainError("closed form requires m != 0");
    detail::check_eigen_line(m, M);
    CompositeKernel k;
    k.m_ = m;
    k.M_ = M;
    k.T_ = T;
    k.mode_ = CompositeMode::ClosedFormTle1;
    k.g_.emplace(m, T);
    if (k.g_->resonant()) throw ResonanceError("closed form: G_m is resonant");
    k.part_ = build_partition(T);
    k.A_ = Eigen::MatrixXd::Constant(1, 1, (m + M) / m);
    k.cond_ = 1.0;
    return k;
}

/// Direct construction for m = 0. Unknowns are the node values v(l) and the
/// additive constant; the last equation is the solvability condition of v''.
inline CompositeKernel build_H_m0(double M, double T) {
    if (M == 0.0 || !std::isfinite(M)) throw NonUniqueSolution("build_H_m0: M = 0 has no unique solution");
    CompositeKernel k;
    k.m_ = 0.0;
    k.M_ = M;
    k.T_ = T;
    k.mode_ = CompositeMode::DirectM0;
    k.part_ = build_partition(T);
    const std::size_t K = k.part_.size();
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(K + 1, K + 1);
    for (std::size_t l = 0; l < K; ++l) {
        S.row(l).head(K) = M * k.row(k.part_.labels[l]).transpose();
        S(l, l) += 1.0;
        S(l, K) = -1.0;
    }
    for (std::size_t j = 0; j < K; ++j)
        S(K, j) = M * (k.part_.intervals[j].second - k.part_.intervals[j].first);
    k.A_ = S;
    k.factorize(S);
    return k;
}

/// Routes to the construction appropriate for (m, T).
inline CompositeKernel make_kernel(double m, double M, double T, const QuadConfig& cfg = {}) {
    if (m == 0.0) return build_H_m0(M, T);
    if (T <= 1.0) return build_H_closed_Tle1(m, M, T);
    return build_H(m, M, T, cfg);
}

inline double eval_H(const CompositeKernel& k, double t, double s) { return k.eval(t, s); }

inline double eval_H_closed_Tle1(double m, double M, double T, double t, double s) {
    if (!(T > 0.0 && T <= 1.0)) throw DomainError("eval_H_closed_Tle1: T must be in (0,1]");
    detail::check_eigen_line(m, M);
    const ReflectionKernel g(m, T);
    return g.eval(t, s) - M / (m + M) * g.eval(0.0, s);
}

/// Integral of H(t, .) over [a, b], split at the kinks of H(t, .).
inline double integral_H(const CompositeKernel& k, double t, double a, double b, const QuadConfig& cfg = {}) {
    const double T = k.T();
    const double tc = detail::clamp_to(t, T);
    BreakpointSet brk{tc, -tc, 0.0};
    for (int l : k.partition().labels) brk.add(l), brk.add(-l);
    return integrate([&](double s) { return k.eval(tc, s); }, a, b, brk, cfg);
}

/// Residuals of the defining properties of H, measured by finite differences.
struct EvalDiagnostics {
    double residual_ode = 0.0;       // |H_tt + m H(-t,s) + M H([t],s)|
    double residual_ode_s = 0.0;     // |H_ss + m H(t,-s)|
    double jump_error = 0.0;         // |dH/dt(s+,s) - dH/dt(s-,s) - 1|
    double periodicity_error = 0.0;  // |H(T,s) - H(-T,s)|, both arguments
    double periodicity_dt_error = 0.0;
    double symmetry_error = 0.0;  // |H(t,s) - H(-t,-s)|
};

namespace detail {

/// Second-order one-sided difference; dir = +1 forward, -1 backward.
template <class F>
double one_sided_diff(F&& f, double x, double h, int dir) {
    const double hh = dir * h;
    return (-3.0 * f(x) + 4.0 * f(x + hh) - f(x + 2.0 * hh)) / (2.0 * hh);
}

inline bool near_any(double x, const std::vector<double>& pts, double gap) {
    for (double p : pts)
        if (std::abs(x - p) < gap) return true;
    return false;
}

}  // namespace detail

/// Finite-difference certification on an n x n grid of interior points.
inline EvalDiagnostics certify(const CompositeKernel& k, int n = 23, double h = 1e-4) {
    const double T = k.T(), m = k.m(), M = k.M();
    const auto H = [&](double t, double s) { return k.eval(t, s); };
    std::vector<double> kinks{-T, T, 0.0};
    for (int l : k.partition().labels) kinks.push_back(l), kinks.push_back(-l);
    for (int j = -floor_trunc(T); j <= floor_trunc(T); ++j) kinks.push_back(j);

    EvalDiagnostics d;
    const double gap = 4.0 * h;
    std::vector<double> pts;
    for (int i = 0; i < n; ++i) pts.push_back(-T + 2.0 * T * (i + 0.5) / n * (1.0 - 1e-3) + T * 1e-3);
    for (double t : pts) {
        for (double s : pts) {
            d.symmetry_error = std::max(d.symmetry_error, std::abs(H(t, s) - H(-t, -s)));
            std::vector<double> avoid_t = kinks;
            avoid_t.push_back(s);
            avoid_t.push_back(-s);
            if (!detail::near_any(t, avoid_t, gap)) {
                const double htt = (H(t + h, s) - 2.0 * H(t, s) + H(t - h, s)) / (h * h);
                const double r = htt + m * H(-t, s) + M * H(floor_trunc(t), s);
                d.residual_ode = std::max(d.residual_ode, std::abs(r));
            }
            std::vector<double> avoid_s = kinks;
            avoid_s.push_back(t);
            avoid_s.push_back(-t);
            if (!detail::near_any(s, avoid_s, gap)) {
                const double hss = (H(t, s + h) - 2.0 * H(t, s) + H(t, s - h)) / (h * h);
                d.residual_ode_s = std::max(d.residual_ode_s, std::abs(hss + m * H(t, -s)));
            }
        }
    }
    for (double s : pts) {
        std::vector<double> avoid = kinks;
        avoid.push_back(-s);
        if (!detail::near_any(s, avoid, 3.0 * gap)) {
            auto f = [&](double t) { return H(t, s); };
            const double jump = detail::one_sided_diff(f, s, h, 1) - detail::one_sided_diff(f, s, h, -1);
            d.jump_error = std::max(d.jump_error, std::abs(jump - 1.0));
        }
        d.periodicity_error = std::max({d.periodicity_error, std::abs(H(T, s) - H(-T, s)),
                                        std::abs(H(s, T) - H(s, -T))});
        if (!detail::near_any(s, {-T, T}, 3.0 * gap)) {
            auto f = [&](double t) { return H(t, s); };
            const double dr = detail::one_sided_diff(f, T, h, -1);
            const double dl = detail::one_sided_diff(f, -T, h, 1);
            d.periodicity_dt_error = std::max(d.periodicity_dt_error, std::abs(dr - dl));
        }
    }
    return d;
}

/// max |H0 - H1 - (M1 - M0) * integral H1(t,r) H0([r],s) dr| over an n x n grid.
inline double relation_check(double m, double M0, double M1, double T, const QuadConfig& cfg = {}, int n = 9) {
    const CompositeKernel k0 = make_kernel(m, M0, T, cfg);
    if (M0 == M1) return 0.0;
    const CompositeKernel k1 = make_kernel(m, M1, T, cfg);
    const auto& part = k1.partition();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = -T + 2.0 * T * i / (n - 1);
        std::vector<double> inner(part.size());
        for (std::size_t j = 0; j < part.size(); ++j)
            inner[j] = integral_H(k1, t, part.intervals[j].first, part.intervals[j].second, cfg);
        for (int q = 0; q < n; ++q) {
            const double s = -T + 2.0 * T * q / (n - 1);
            double integral = 0.0;
            for (std::size_t j = 0; j < part.size(); ++j) integral += inner[j] * k0.eval(part.labels[j], s);
            const double defect = k0.eval(t, s) - k1.eval(t, s) - (M1 - M0) * integral;
            worst = std::max(worst, std::abs(defect));
        }
    }
    return worst;
}

}  // namespace greens
