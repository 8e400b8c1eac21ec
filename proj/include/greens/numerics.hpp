#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "greens/errors.hpp"

namespace greens {

/// Bisection on a sign change of f over [lo, hi]; returns the midpoint of
/// the final bracket.
template <class F>
double bisect_root(F&& f, double lo, double hi, double tol, int max_iter = 200) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw BracketError("bisect_root: no sign change in bracket");
    for (int i = 0; i < max_iter && std::abs(hi - lo) > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Bisection on a boolean predicate; `inside` must hold at `in` and fail at
/// `out`. Returns the last (inside, outside) pair once they are within tol.
template <class P>
std::pair<double, double> bisect_predicate(P&& inside, double in, double out, double tol,
                                           int max_iter = 200) {
    for (int i = 0; i < max_iter && std::abs(out - in) > tol; ++i) {
        const double mid = 0.5 * (in + out);
        if (inside(mid))
            in = mid;
        else
            out = mid;
    }
    return {in, out};
}

struct Minimum1D {
    double x;
    double value;
};

/// Golden-section search for a minimum of f on [a, b].
template <class F>
Minimum1D golden_minimize(F&& f, double a, double b, double tol = 1e-10, int max_iter = 200) {
    constexpr double kInvPhi = 0.6180339887498949;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    Minimum1D best{a, f(a)};
    for (double x : {b, c, d}) {
        const double v = f(x);
        if (v < best.value) best = {x, v};
    }
    return best;
}

}  // namespace greens
