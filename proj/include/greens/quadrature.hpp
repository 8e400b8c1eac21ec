#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include "greens/errors.hpp"

namespace greens {

struct QuadConfig {
    int order = 16;           // Gauss-Legendre nodes per panel
    double tol = 1e-10;       // absolute error target
    int max_panels = 4096;    // per breakpoint-free segment

    void validate() const {
        if (order < 2) throw DomainError("QuadConfig: order must be >= 2");
        if (!(tol > 0.0)) throw DomainError("QuadConfig: tol must be > 0");
        if (max_panels < 1) throw DomainError("QuadConfig: max_panels must be >= 1");
    }
};

/// Sorted, deduplicated set of kink locations.
class BreakpointSet {
public:
    static constexpr double kDedupTol = 1e-14;

    BreakpointSet() = default;
    explicit BreakpointSet(std::vector<double> pts) : points_(std::move(pts)) { normalize(); }
    BreakpointSet(std::initializer_list<double> pts) : points_(pts) { normalize(); }

    /// Integers inside [-T, T], both endpoints, and any extra kinks.
    static BreakpointSet for_interval(double T, std::span<const double> extra = {}) {
        std::vector<double> pts{-T, T};
        const auto n = static_cast<long>(std::floor(T));
        for (long k = -n; k <= n; ++k) pts.push_back(static_cast<double>(k));
        pts.insert(pts.end(), extra.begin(), extra.end());
        return BreakpointSet(std::move(pts));
    }

    void add(double x) {
        points_.push_back(x);
        normalize();
    }

    const std::vector<double>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }

private:
    void normalize() {
        std::sort(points_.begin(), points_.end());
        std::vector<double> out;
        out.reserve(points_.size());
        for (double p : points_) {
            if (out.empty() || std::abs(p - out.back()) > kDedupTol) out.push_back(p);
        }
        points_ = std::move(out);
    }

    std::vector<double> points_;
};

/// Nodes and weights on [-1, 1], nodes ascending.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

inline QuadratureRule compute_gauss_legendre(int n) {
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

inline QuadratureRule compute_gauss_lobatto(int n) {
    // n points including both ends; Newton iteration on the Legendre recurrence.
    const int N = n - 1;
    std::vector<double> x(n), xold(n, 2.0);
    for (int i = 0; i < n; ++i) x[i] = std::cos(std::numbers::pi * i / N);
    std::vector<std::vector<double>> P(n, std::vector<double>(n));
    for (int iter = 0; iter < 200; ++iter) {
        double change = 0.0;
        for (int i = 0; i < n; ++i) change = std::max(change, std::abs(x[i] - xold[i]));
        if (change < 1e-16) break;
        xold = x;
        for (int i = 0; i < n; ++i) {
            P[i][0] = 1.0;
            P[i][1] = x[i];
            for (int k = 2; k <= N; ++k)
                P[i][k] = ((2.0 * k - 1.0) * x[i] * P[i][k - 1] - (k - 1.0) * P[i][k - 2]) / k;
            x[i] = xold[i] - (x[i] * P[i][N] - P[i][N - 1]) / (n * P[i][N]);
        }
    }
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[n - 1 - i] = x[i];
        rule.weights[n - 1 - i] = 2.0 / (N * n * P[i][N] * P[i][N]);
    }
    rule.nodes.front() = -1.0;
    rule.nodes.back() = 1.0;
    return rule;
}

template <class Compute>
const QuadratureRule& cached_rule(int n, std::map<int, QuadratureRule>& cache, std::mutex& mu,
                                  Compute compute) {
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute(n)).first;
    return it->second;
}

}  // namespace detail

inline const QuadratureRule& gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mu;
    return detail::cached_rule(n, cache, mu, detail::compute_gauss_legendre);
}

inline const QuadratureRule& gauss_lobatto(int n) {
    if (n < 2) throw DomainError("gauss_lobatto: n must be >= 2");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mu;
    return detail::cached_rule(n, cache, mu, detail::compute_gauss_lobatto);
}

/// Fixed rule on [a, b] split into `panels` equal panels.
template <class F>
double integrate_fixed(F&& f, double a, double b, int panels, const QuadratureRule& rule) {
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double acc = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q)
            acc += rule.weights[q] * f(mid + 0.5 * h * rule.nodes[q]);
        sum += 0.5 * h * acc;
    }
    return sum;
}

/// Composite Gauss-Legendre over [a, b], split at every breakpoint inside
/// (a, b), panel-halving per segment until successive estimates agree.
template <class F>
double integrate(F&& f, double a, double b, const BreakpointSet& brk = {},
                 const QuadConfig& cfg = {}) {
    cfg.validate();
    if (!(a <= b)) throw DomainError("integrate: requires a <= b");
    if (a == b) return 0.0;

    std::vector<double> cuts{a};
    for (double p : brk.points())
        if (p > a + BreakpointSet::kDedupTol && p < b - BreakpointSet::kDedupTol) cuts.push_back(p);
    cuts.push_back(b);

    const auto& rule = gauss_legendre(cfg.order);
    const double total = b - a;
    double result = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        int panels = 1;
        double coarse = integrate_fixed(f, lo, hi, panels, rule);
        double fine = integrate_fixed(f, lo, hi, 2 * panels, rule);
        const double seg_tol = cfg.tol * (hi - lo) / total;
        auto err = [&] { return std::abs(fine - coarse); };
        auto floor_tol = [&] {
            return 64.0 * std::numeric_limits<double>::epsilon() * std::abs(fine);
        };
        while (err() > std::max(seg_tol, floor_tol())) {
            panels *= 2;
            if (2 * panels > cfg.max_panels)
                throw QuadratureError("integrate: no convergence within max_panels",
                                      result + fine, err());
            coarse = fine;
            fine = integrate_fixed(f, lo, hi, 2 * panels, rule);
        }
        result += fine;
    }
    return result;
}

/// Truncation toward zero with half-open conventions: n on [n, n+1) for
/// n >= 0 and -n on (-n-1, -n].
inline int floor_trunc(double t) {
    return t >= 0.0 ? static_cast<int>(std::floor(t)) : -static_cast<int>(std::floor(-t));
}

}  // namespace greens
