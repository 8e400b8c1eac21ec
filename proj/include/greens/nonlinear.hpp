#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "greens/composite_kernel.hpp"
#include "greens/errors.hpp"
#include "greens/parallel.hpp"
#include "greens/quadrature.hpp"
#include "greens/sign_region.hpp"

namespace greens {

/// f(t, x, y, z) with x = v(t), y = v(-t), z = v([t]).
using Nonlinearity = std::function<double(double, double, double, double)>;

/// v''(t) = f(t, v(t), v(-t), v([t])), periodic on [-T, T].
struct NonlinearProblem {
    Nonlinearity f;
    double m = 0.0;
    double M = 0.0;
    double T = 1.0;

    /// sigma = f + m y + M z, the forcing of the linear problem.
    double shifted(double t, double x, double y, double z) const { return f(t, x, y, z) + m * y + M * z; }
};

struct ConeBounds {
    double r = 0.0;
    double R = 0.0;
    double L = 0.0;
    double l = 0.0;

    void validate() const {
        if (!(r > 0.0 && R > r)) throw DomainError("ConeBounds: need 0 < r < R");
        if (!(l > 0.0 && L >= l)) throw DomainError("ConeBounds: need 0 < l <= L");
    }
};

enum class Conclusion { PositiveSolutionExists, NegativeSolutionExists, Inconclusive };

inline const char* to_string(Conclusion c) {
    switch (c) {
        case Conclusion::PositiveSolutionExists: return "PositiveSolutionExists";
        case Conclusion::NegativeSolutionExists: return "NegativeSolutionExists";
        case Conclusion::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct Violation {
    std::string check;  // "cone", "cond1_small", "cond1_large", "cond2_small", "cond2_large"
    double t, x, y, z;
    double lhs;    // f + m y + M z
    double bound;  // right-hand side of the violated inequality
};

struct ExistenceReport {
    bool cone_ok = false;
    bool cond1_ok = false;
    bool cond2_ok = false;
    std::vector<Violation> violating_points;
    Conclusion conclusion = Conclusion::Inconclusive;
    ConeBounds bounds;
    std::size_t samples = 0;
    std::string note = "sampled falsification check on a finite grid, not a proof";
};

/// L = max H and l = min H; H must be positive.
inline std::pair<double, double> compute_L_l(const CompositeKernel& k, int grid_n = 101) {
    const MinMax mm = min_max_H(k, grid_n);
    if (!(mm.min > 0.0)) throw InvalidRegion("compute_L_l: H_{m,M} is not positive");
    return {mm.max, mm.min};
}

namespace detail {

inline constexpr std::size_t kMaxViolationsPerCheck = 8;

struct BoxCheck {
    std::string name;
    double lo, hi;  // same interval for x, y, z
    std::function<double(double)> bound;
    bool at_least;  // lhs >= bound(x) when true, lhs <= bound(x) otherwise
};

/// Evaluates every check on the tensor grid t x box^3; returns per-check pass flags.
inline std::vector<bool> run_checks(const NonlinearProblem& p, const std::vector<BoxCheck>& checks, int n,
                                    ExistenceReport& rep, unsigned threads) {
    std::vector<double> ts(n);
    for (int i = 0; i < n; ++i) ts[i] = -p.T + 2.0 * p.T * i / (n - 1);
    std::vector<bool> ok(checks.size(), true);
    std::vector<std::vector<Violation>> found(checks.size());
    parallel_for(checks.size(), threads, [&](std::size_t c) {
        const auto& ch = checks[c];
        std::vector<double> xs(n);
        for (int i = 0; i < n; ++i) xs[i] = ch.lo + (ch.hi - ch.lo) * i / (n - 1);
        for (double t : ts)
            for (double x : xs)
                for (double y : xs)
                    for (double z : xs) {
                        const double lhs = p.shifted(t, x, y, z);
                        const double b = ch.bound(x);
                        const bool good = ch.at_least ? lhs >= b : lhs <= b;
                        if (!good) {
                            ok[c] = false;
                            if (found[c].size() < kMaxViolationsPerCheck) found[c].push_back({ch.name, t, x, y, z, lhs, b});
                        }
                    }
    });
    for (const auto& f : found) rep.violating_points.insert(rep.violating_points.end(), f.begin(), f.end());
    rep.samples += checks.size() * static_cast<std::size_t>(n) * n * n * n;
    return ok;
}

}  // namespace detail

/// Samples the hypotheses for a positive solution: the cone inequality on
/// [l r/L, L R/l]^3 and conditions 1 and 2 on [l r/L, r]^3 and [R, L R/l]^3.
inline ExistenceReport krasnoselskii_check(const NonlinearProblem& p, const ConeBounds& b, int sample_n = 11,
                                           int threads = 0) {
    b.validate();
    if (sample_n < 2) throw DomainError("krasnoselskii_check: sample_n must be >= 2");
    ExistenceReport rep;
    rep.bounds = b;
    const double lo_small = b.l / b.L * b.r, hi_large = b.L / b.l * b.R;
    const double up = b.L / (2.0 * p.T * b.l * b.l), down = 1.0 / (2.0 * p.T * b.L);
    std::vector<detail::BoxCheck> checks{
        {"cone", lo_small, hi_large, [](double) { return 0.0; }, true},
        {"cond1_small", lo_small, b.r, [up](double x) { return up * x; }, true},
        {"cond1_large", b.R, hi_large, [down](double x) { return down * x; }, false},
        {"cond2_small", lo_small, b.r, [down](double x) { return down * x; }, false},
        {"cond2_large", b.R, hi_large, [up](double x) { return up * x; }, true},
    };
    const auto ok = detail::run_checks(p, checks, sample_n, rep, resolve_threads(threads));
    rep.cone_ok = ok[0];
    rep.cond1_ok = ok[1] && ok[2];
    rep.cond2_ok = ok[3] && ok[4];
    rep.conclusion = rep.cone_ok && (rep.cond1_ok || rep.cond2_ok) ? Conclusion::PositiveSolutionExists
                                                                   : Conclusion::Inconclusive;
    return rep;
}

/// Mirror of krasnoselskii_check on the negative boxes [-L R/l, -l r/L].
inline ExistenceReport krasnoselskii_check_negative(const NonlinearProblem& p, const ConeBounds& b,
                                                    int sample_n = 11, int threads = 0) {
    b.validate();
    if (sample_n < 2) throw DomainError("krasnoselskii_check_negative: sample_n must be >= 2");
    ExistenceReport rep;
    rep.bounds = b;
    const double lo_small = b.l / b.L * b.r, hi_large = b.L / b.l * b.R;
    const double up = b.L / (2.0 * p.T * b.l * b.l), down = 1.0 / (2.0 * p.T * b.L);
    std::vector<detail::BoxCheck> checks{
        {"cone", -hi_large, -lo_small, [](double) { return 0.0; }, false},
        {"cond1_small", -b.r, -lo_small, [up](double x) { return up * x; }, false},
        {"cond1_large", -hi_large, -b.R, [down](double x) { return down * x; }, true},
        {"cond2_small", -b.r, -lo_small, [down](double x) { return down * x; }, true},
        {"cond2_large", -hi_large, -b.R, [up](double x) { return up * x; }, false},
    };
    const auto ok = detail::run_checks(p, checks, sample_n, rep, resolve_threads(threads));
    rep.cone_ok = ok[0];
    rep.cond1_ok = ok[1] && ok[2];
    rep.cond2_ok = ok[3] && ok[4];
    rep.conclusion = rep.cone_ok && (rep.cond1_ok || rep.cond2_ok) ? Conclusion::NegativeSolutionExists
                                                                   : Conclusion::Inconclusive;
    return rep;
}

/// f^(t, x, y, z) = -f(t, -x, -y, -z): negative solutions of p are the
/// negatives of positive solutions of the reflected problem.
inline NonlinearProblem reflect_problem(const NonlinearProblem& p) {
    NonlinearProblem q = p;
    q.f = [f = p.f](double t, double x, double y, double z) { return -f(t, -x, -y, -z); };
    return q;
}

/// Values of a function on the fixed-point grid.
struct GridFunction {
    std::vector<double> t;
    std::vector<double> v;
};

struct PicardOptions {
    double tol = 1e-10;
    int max_iter = 500;
    double damping = 0.5;
    bool newton_fallback = true;
    int panel_degree = 10;  // Gauss-Lobatto nodes per panel minus one
    int target_nodes = 401;
    int threads = 0;
    /// When set, a fixed point with max|v| outside [r, R] is rejected and
    /// Newton is started from the initial guess instead.
    std::optional<std::pair<double, double>> annulus;
};

struct SolveReport {
    bool converged = false;
    std::string method = "picard";  // "picard" or "picard+newton"
    int iterations = 0;
    int newton_iterations = 0;
    double final_damping = 0.0;
    double update_norm = 0.0;
    double ode_residual = 0.0;  // max |v'' - f(t, v(t), v(-t), v([t]))| over panel nodes
    double periodicity_error = 0.0;
    double periodicity_dt_error = 0.0;
    double min_value = 0.0;
    double max_value = 0.0;
    double min_iterate = 0.0;  // smallest grid value seen along the Picard iterates
    bool in_annulus = true;    // max|v| within the requested annulus, if any
    std::vector<std::string> warnings;
};

class PicardNonConvergence : public NonConvergence {
public:
    PicardNonConvergence(const std::string& what, GridFunction last, SolveReport report)
        : NonConvergence(what), last_(std::move(last)), report_(std::move(report)) {}
    const GridFunction& last_iterate() const noexcept { return last_; }
    const SolveReport& report() const noexcept { return report_; }

private:
    GridFunction last_;
    SolveReport report_;
};

/// Symmetric composite Gauss-Lobatto grid on [-T, T] with panel ends at the
/// integers, and the product-integration matrix of the kernel H.
class FixedPointGrid {
public:
    FixedPointGrid(const CompositeKernel& k, int degree, int target_nodes, int threads = 0) : T_(k.T()), d_(degree) {
        if (degree < 2) throw DomainError("FixedPointGrid: degree must be >= 2");
        build_panels(target_nodes);
        build_weights(k, threads);
        build_derivative();
    }

    std::size_t size() const noexcept { return t_.size(); }
    const std::vector<double>& nodes() const noexcept { return t_; }
    std::size_t mirror(std::size_t i) const noexcept { return t_.size() - 1 - i; }
    std::size_t panels() const noexcept { return lo_.size(); }
    int degree() const noexcept { return d_; }

    /// Global index of node q of panel p.
    std::size_t global(std::size_t p, int q) const noexcept { return p * d_ + q; }
    double panel_node(std::size_t p, int q) const noexcept { return t_[global(p, q)]; }
    int panel_label(std::size_t p) const noexcept { return label_[p]; }
    std::size_t label_node(std::size_t p) const noexcept { return label_node_[p]; }

    /// sigma evaluated per panel node, with z taken from the panel's label.
    template <class G>
    Eigen::VectorXd sample(const Eigen::VectorXd& v, G&& g) const {
        Eigen::VectorXd s(panels() * (d_ + 1));
        for (std::size_t p = 0; p < panels(); ++p)
            for (int q = 0; q <= d_; ++q) {
                const std::size_t i = global(p, q);
                s[p * (d_ + 1) + q] = g(panel_time(p, q), v[i], v[mirror(i)], v[label_node_[p]]);
            }
        return s;
    }

    /// Node time, moved one ulp into the panel at its ends so that f sees the
    /// one-sided limit belonging to the panel.
    double panel_time(std::size_t p, int q) const noexcept {
        const double t = t_[global(p, q)];
        if (q == 0) return std::nextafter(t, hi_[p]);
        if (q == d_) return std::nextafter(t, lo_[p]);
        return t;
    }

    /// (T v)(t_i) = integral of H(t_i, s) sigma(s) ds.
    Eigen::VectorXd apply(const Eigen::VectorXd& sigma) const { return W_ * sigma; }
    const Eigen::MatrixXd& weights() const noexcept { return W_; }

    /// First and second derivatives of the panel interpolants at each panel node.
    std::pair<Eigen::VectorXd, Eigen::VectorXd> derivatives(const Eigen::VectorXd& v) const {
        Eigen::VectorXd d1(panels() * (d_ + 1)), d2(panels() * (d_ + 1));
        for (std::size_t p = 0; p < panels(); ++p) {
            Eigen::VectorXd loc(d_ + 1);
            for (int q = 0; q <= d_; ++q) loc[q] = v[global(p, q)];
            const double sc = 2.0 / (hi_[p] - lo_[p]);
            const Eigen::VectorXd a = sc * (D_ * loc);
            const Eigen::VectorXd b = sc * (D_ * a);
            d1.segment(p * (d_ + 1), d_ + 1) = a;
            d2.segment(p * (d_ + 1), d_ + 1) = b;
        }
        return {d1, d2};
    }

private:
    void build_panels(int target_nodes) {
        std::vector<double> brk{-T_, T_};
        for (int k = -floor_trunc(T_); k <= floor_trunc(T_); ++k)
            if (std::abs(k) < T_) brk.push_back(k);
        std::sort(brk.begin(), brk.end());
        const double h = 2.0 * T_ / std::max(1.0, (target_nodes - 1.0) / d_);
        for (std::size_t s = 0; s + 1 < brk.size(); ++s) {
            const double a = brk[s], b = brk[s + 1];
            const int n = std::max(1, static_cast<int>(std::round((b - a) / h)));
            for (int j = 0; j < n; ++j) {
                lo_.push_back(j == 0 ? a : a + (b - a) * j / n);
                hi_.push_back(j == n - 1 ? b : a + (b - a) * (j + 1) / n);
            }
        }
        // enforce exact mirror symmetry of the panel ends
        const std::size_t P = lo_.size();
        for (std::size_t p = 0; p < P / 2; ++p) {
            lo_[P - 1 - p] = -hi_[p];
            hi_[P - 1 - p] = -lo_[p];
        }
        for (std::size_t p = 0; p + 1 < P; ++p) lo_[p + 1] = hi_[p];
        rule_ = gauss_lobatto(d_ + 1);
        t_.assign(P * d_ + 1, 0.0);
        for (std::size_t p = 0; p < P; ++p)
            for (int q = 0; q <= d_; ++q) {
                double x;
                if (q == 0)
                    x = lo_[p];
                else if (q == d_)
                    x = hi_[p];
                else
                    x = 0.5 * (lo_[p] + hi_[p]) + 0.5 * (hi_[p] - lo_[p]) * rule_.nodes[q];
                t_[global(p, q)] = x;
            }
        const std::size_t N = t_.size();
        for (std::size_t i = 0; i < N / 2; ++i) t_[N - 1 - i] = -t_[i];
        if (N % 2) t_[N / 2] = 0.0;
        for (std::size_t p = 0; p < P; ++p) {
            label_.push_back(floor_trunc(0.5 * (lo_[p] + hi_[p])));
            const double target = label_.back();
            const auto it = std::find(t_.begin(), t_.end(), target);
            if (it == t_.end()) throw DomainError("FixedPointGrid: integer node missing");
            label_node_.push_back(static_cast<std::size_t>(it - t_.begin()));
        }
    }

    /// Lagrange basis of the panel rule at local coordinate x.
    Eigen::VectorXd lagrange(double x) const {
        Eigen::VectorXd l(d_ + 1);
        for (int q = 0; q <= d_; ++q) {
            double v = 1.0;
            for (int j = 0; j <= d_; ++j)
                if (j != q) v *= (x - rule_.nodes[j]) / (rule_.nodes[q] - rule_.nodes[j]);
            l[q] = v;
        }
        return l;
    }

    void build_weights(const CompositeKernel& k, int threads) {
        const std::size_t N = t_.size(), P = lo_.size();
        W_ = Eigen::MatrixXd::Zero(N, P * (d_ + 1));
        const auto& gl = gauss_legendre(16);
        parallel_for(N, resolve_threads(threads), [&](std::size_t i) {
            const double t = t_[i];
            const bool closed = k.mode() == CompositeMode::ClosedFormTle1;
            const Eigen::VectorXd b = closed ? Eigen::VectorXd() : k.row(t);
            auto H = [&](double s) { return closed ? k.eval(t, s) : k.eval_with(t, s, b, k.column(s)); };
            for (std::size_t p = 0; p < P; ++p) {
                std::vector<double> cuts{lo_[p], hi_[p]};
                for (double c : {t, -t})
                    if (c > lo_[p] && c < hi_[p]) cuts.push_back(c);
                std::sort(cuts.begin(), cuts.end());
                const double mid = 0.5 * (lo_[p] + hi_[p]), half = 0.5 * (hi_[p] - lo_[p]);
                for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
                    const double a = cuts[c], bb = cuts[c + 1];
                    if (bb - a <= 0.0) continue;
                    for (std::size_t g = 0; g < gl.nodes.size(); ++g) {
                        const double s = 0.5 * (a + bb) + 0.5 * (bb - a) * gl.nodes[g];
                        const double w = 0.5 * (bb - a) * gl.weights[g] * H(s);
                        W_.row(i).segment(p * (d_ + 1), d_ + 1) += w * lagrange((s - mid) / half).transpose();
                    }
                }
            }
        });
    }

    void build_derivative() {
        D_.resize(d_ + 1, d_ + 1);
        const auto& x = rule_.nodes;
        for (int i = 0; i <= d_; ++i)
            for (int j = 0; j <= d_; ++j) {
                if (i == j) {
                    double s = 0.0;
                    for (int k = 0; k <= d_; ++k)
                        if (k != i) s += 1.0 / (x[i] - x[k]);
                    D_(i, j) = s;
                } else {
                    double num = 1.0, den = 1.0;
                    for (int k = 0; k <= d_; ++k) {
                        if (k != i && k != j) num *= x[i] - x[k];
                        if (k != j) den *= x[j] - x[k];
                    }
                    D_(i, j) = num / den;
                }
            }
    }

    double T_;
    int d_;
    std::vector<double> lo_, hi_;
    std::vector<int> label_;
    std::vector<std::size_t> label_node_;
    std::vector<double> t_;
    QuadratureRule rule_;
    Eigen::MatrixXd W_;
    Eigen::MatrixXd D_;
};

namespace detail {

inline void fill_diagnostics(const FixedPointGrid& g, const NonlinearProblem& p, const Eigen::VectorXd& v,
                             SolveReport& rep) {
    const auto [d1, d2] = g.derivatives(v);
    const auto fv = g.sample(v, [&](double t, double x, double y, double z) { return p.f(t, x, y, z); });
    rep.ode_residual = (d2 - fv).cwiseAbs().maxCoeff();
    const std::size_t last = (g.panels() - 1) * (g.degree() + 1) + g.degree();
    rep.periodicity_error = std::abs(v[0] - v[v.size() - 1]);
    rep.periodicity_dt_error = std::abs(d1[0] - d1[last]);
    rep.min_value = v.minCoeff();
    rep.max_value = v.maxCoeff();
}

inline GridFunction to_grid_function(const FixedPointGrid& g, const Eigen::VectorXd& v) {
    return {g.nodes(), std::vector<double>(v.data(), v.data() + v.size())};
}

}  // namespace detail

/// Fixed point of v = integral of H(t,s) [f(s, v(s), v(-s), v([s])) + m v(-s) + M v([s])] ds
/// by damped Picard iteration, with a Newton fallback when Picard stalls.
inline std::pair<GridFunction, SolveReport> picard_solve(const NonlinearProblem& p, const CompositeKernel& k,
                                                         const std::function<double(double)>& v0,
                                                         const PicardOptions& opt = {}) {
    if (!(opt.damping > 0.0 && opt.damping <= 1.0)) throw DomainError("picard_solve: damping must be in (0,1]");
    if (!(opt.tol > 0.0) || opt.max_iter < 1) throw DomainError("picard_solve: bad tolerance or iteration limit");
    if (std::abs(k.T() - p.T) > 1e-14 || std::abs(k.m() - p.m) > 1e-14 || std::abs(k.M() - p.M) > 1e-14)
        throw DomainError("picard_solve: kernel parameters differ from the problem");
    const FixedPointGrid g(k, opt.panel_degree, opt.target_nodes, opt.threads);
    const std::size_t N = g.size();
    Eigen::VectorXd v(N);
    for (std::size_t i = 0; i < N; ++i) v[i] = v0(g.nodes()[i]);
    const Eigen::VectorXd start = v;

    auto sigma = [&](double t, double x, double y, double z) { return p.shifted(t, x, y, z); };
    auto T_op = [&](const Eigen::VectorXd& u) { return g.apply(g.sample(u, sigma)); };

    SolveReport rep;
    rep.min_iterate = v.minCoeff();
    double omega = opt.damping;
    double prev_update = std::numeric_limits<double>::infinity();
    constexpr double kMinDamping = 1.0 / 1024.0;
    int growth = 0;
    for (int it = 1; it <= opt.max_iter; ++it) {
        const Eigen::VectorXd tv = T_op(v);
        const Eigen::VectorXd next = (1.0 - omega) * v + omega * tv;
        const double update = (next - v).cwiseAbs().maxCoeff();
        if (!std::isfinite(update)) break;
        rep.iterations = it;
        if (update > prev_update) {
            ++growth;
            omega *= 0.5;
            if (omega < kMinDamping) break;
        }
        v = next;
        rep.min_iterate = std::min(rep.min_iterate, v.minCoeff());
        prev_update = update;
        rep.update_norm = update;
        if (update < opt.tol) {
            rep.converged = true;
            break;
        }
    }
    rep.final_damping = omega;
    if (growth > 0 && rep.converged) rep.warnings.push_back("damping was reduced during the iteration");
    auto inside = [&](const Eigen::VectorXd& u) {
        if (!opt.annulus) return true;
        const double n = u.cwiseAbs().maxCoeff();
        return n >= opt.annulus->first && n <= opt.annulus->second;
    };
    if (rep.converged && !inside(v)) {
        rep.converged = false;
        rep.warnings.push_back("Picard fixed point lies outside the annulus");
    }

    if (!rep.converged && opt.newton_fallback) {
        // Newton on F(v) = v - T(v); partial derivatives of f by central differences.
        rep.method = "picard+newton";
        rep.warnings.push_back("Picard iteration stalled; continued with Newton from the initial guess");
        v = start;
        for (int it = 1; it <= 60; ++it) {
            rep.newton_iterations = it;
            const Eigen::VectorXd F = v - T_op(v);
            Eigen::MatrixXd Dg = Eigen::MatrixXd::Zero(g.panels() * (g.degree() + 1), N);
            for (std::size_t pp = 0; pp < g.panels(); ++pp)
                for (int q = 0; q <= g.degree(); ++q) {
                    const std::size_t i = g.global(pp, q), r = pp * (g.degree() + 1) + q;
                    const std::size_t im = g.mirror(i), iz = g.label_node(pp);
                    const double t = g.panel_time(pp, q), x = v[i], y = v[im], z = v[iz];
                    auto dpart = [&](int which) {
                        double a[3] = {x, y, z};
                        const double h = 1e-6 * std::max(1.0, std::abs(a[which]));
                        a[which] += h;
                        const double fp = sigma(t, a[0], a[1], a[2]);
                        a[which] -= 2 * h;
                        const double fm = sigma(t, a[0], a[1], a[2]);
                        return (fp - fm) / (2 * h);
                    };
                    Dg(r, i) += dpart(0);
                    Dg(r, im) += dpart(1);
                    Dg(r, iz) += dpart(2);
                }
            const Eigen::MatrixXd J = Eigen::MatrixXd::Identity(N, N) - g.weights() * Dg;
            const Eigen::VectorXd step = J.partialPivLu().solve(F);
            v -= step;
            rep.update_norm = step.cwiseAbs().maxCoeff();
            if (!std::isfinite(rep.update_norm)) break;
            if (rep.update_norm < opt.tol) {
                rep.converged = true;
                break;
            }
        }
    }

    rep.in_annulus = inside(v);
    detail::fill_diagnostics(g, p, v, rep);
    auto sol = detail::to_grid_function(g, v);
    if (!rep.converged) throw PicardNonConvergence("picard_solve: no convergence", sol, rep);
    return {sol, rep};
}

inline std::pair<GridFunction, SolveReport> picard_solve(const NonlinearProblem& p, const CompositeKernel& k,
                                                         double v0, const PicardOptions& opt = {}) {
    return picard_solve(p, k, [v0](double) { return v0; }, opt);
}

/// Stationary Schrodinger model with reflection:
/// hbar^2/(2 mp) v'' = alpha |v([t])|^2 v - mu v + beta v(-t).
struct SchrodingerParams {
    double alpha = 0.1;
    double beta = -0.1;
    double mu = 0.05;
    double mp = 1.0;
    double hbar = 1.0;
    double T = 0.8;
    double r = 1.0;
    double R = 2.0;
};

struct AlphaWindows {
    double cone_lower = 0.0;   // alpha >= mu L^2 / (l^2 r^2)
    double cond1_lower = 0.0;  // condition 1 window
    double cond1_upper = 0.0;
    double cond2_lower = 0.0;  // condition 2 window derived from the box inequalities
    double cond2_upper = 0.0;
    double cond2_swapped_lower = 0.0;  // same window with the two bracketed terms exchanged
    double cond2_swapped_upper = 0.0;
};

inline AlphaWindows schrodinger_alpha_windows(const SchrodingerParams& s, double L, double l) {
    const double a = s.hbar * s.hbar / (4.0 * s.mp * s.T);
    AlphaWindows w;
    w.cone_lower = s.mu * L * L / (l * l * s.r * s.r);
    w.cond1_lower = L * L / (l * l * s.r * s.r) * (a * L / (l * l) + s.mu);
    w.cond1_upper = l * l / (L * L * s.R * s.R) * (a / L + s.mu);
    w.cond2_lower = 1.0 / (s.R * s.R) * (a * L / (l * l) + s.mu);
    w.cond2_upper = 1.0 / (s.r * s.r) * (a / L + s.mu);
    w.cond2_swapped_lower = 1.0 / (s.R * s.R) * (a / L + s.mu);
    w.cond2_swapped_upper = 1.0 / (s.r * s.r) * (a * L / (l * l) + s.mu);
    return w;
}

inline NonlinearProblem schrodinger_problem(const SchrodingerParams& s) {
    NonlinearProblem p;
    p.m = -2.0 * s.beta * s.mp / (s.hbar * s.hbar);
    p.M = 0.0;
    p.T = s.T;
    const double scale = s.hbar * s.hbar / (2.0 * s.mp);
    p.f = [s, scale](double, double x, double y, double z) {
        return (s.alpha * z * z * x - s.mu * x + s.beta * y) / scale;
    };
    return p;
}

struct SchrodingerResult {
    ExistenceReport existence;
    AlphaWindows windows;
    bool prescreen_cone = false;
    bool prescreen_cond1 = false;
    bool prescreen_cond2 = false;
    GridFunction solution;
    SolveReport solve;
    double m = 0.0;
    double L = 0.0;
    double l = 0.0;
};

/// Checks the parameter range, screens alpha against the closed-form windows,
/// runs the sampled existence check and solves from v0 = r.
inline SchrodingerResult schrodinger_demo(const SchrodingerParams& s, int sample_n = 11,
                                          const PicardOptions& opt = {}) {
    if (!(s.mp > 0.0 && s.hbar > 0.0 && s.mu > 0.0 && s.T > 0.0))
        throw DomainError("schrodinger_demo: mp, hbar, mu and T must be positive");
    const double beta_min = -std::pow(std::numbers::pi / (2.0 * s.T), 2) * s.hbar * s.hbar / (2.0 * s.mp);
    if (!(s.beta >= beta_min && s.beta <= 0.0))
        throw InvalidRegion("schrodinger_demo: beta outside [-(pi/2T)^2 hbar^2/(2 mp), 0]");
    SchrodingerResult out;
    const NonlinearProblem p = schrodinger_problem(s);
    out.m = p.m;
    if (p.m == 0.0) throw InvalidRegion("schrodinger_demo: beta = 0 gives m = 0, M = 0 (no Green's function)");
    const CompositeKernel k = make_kernel(p.m, p.M, p.T);
    const auto [L, l] = compute_L_l(k);
    out.L = L;
    out.l = l;
    out.windows = schrodinger_alpha_windows(s, L, l);
    out.prescreen_cone = s.alpha >= out.windows.cone_lower;
    out.prescreen_cond1 = out.windows.cond1_lower <= s.alpha && s.alpha <= out.windows.cond1_upper;
    out.prescreen_cond2 = out.windows.cond2_lower <= s.alpha && s.alpha <= out.windows.cond2_upper;
    out.existence = krasnoselskii_check(p, ConeBounds{s.r, s.R, L, l}, sample_n, opt.threads);
    PicardOptions o = opt;
    o.annulus = std::pair{s.r, s.R};
    auto [sol, rep] = picard_solve(p, k, s.r, o);
    out.solution = std::move(sol);
    out.solve = std::move(rep);
    return out;
}

}  // namespace greens
