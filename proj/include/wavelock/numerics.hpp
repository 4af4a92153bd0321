#pragma once

// Small numerical helpers shared by the solver and the weight reconstruction.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include <boost/math/tools/toms748_solve.hpp>

#include "wavelock/core.hpp"

namespace wavelock::numerics {

/// log(exp(a) + exp(b)) without overflow; -inf arguments are absorbed.
inline double log_add_exp(double a, double b) noexcept {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

inline double safe_log(double c) noexcept {
    return c > 0.0 ? std::log(c) : -std::numeric_limits<double>::infinity();
}

/// Root of a continuous function with a sign change on [lo, hi], found with
/// TOMS 748 until the bracket width is at most `width`. Throws SolverFailure
/// when the bracket is invalid or the iteration budget runs out.
template <class F>
double bracketed_root(F&& f, double lo, double hi, double flo, double fhi, double width,
                      const char* what, std::uintmax_t max_iter = 200) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi) || !std::isfinite(flo) || !std::isfinite(fhi)) {
        throw SolverFailure(std::string(what) + ": bracket does not enclose a root",
                            {"lo=" + std::to_string(lo) + " f(lo)=" + std::to_string(flo),
                             "hi=" + std::to_string(hi) + " f(hi)=" + std::to_string(fhi)});
    }
    std::uintmax_t iters = max_iter;
    auto tol = [width](double a, double b) { return std::abs(b - a) <= width; };
    std::pair<double, double> r;
    try {
        r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    } catch (const std::exception& e) {
        throw SolverFailure(std::string(what) + ": root finder raised: " + e.what());
    }
    if (iters >= max_iter && !tol(r.first, r.second)) {
        throw SolverFailure(std::string(what) + ": iteration budget exhausted",
                            {"bracket=[" + std::to_string(r.first) + ", " +
                             std::to_string(r.second) + "]"});
    }
    return 0.5 * (r.first + r.second);
}

template <class F>
double bracketed_root(F&& f, double lo, double hi, double width, const char* what,
                      std::uintmax_t max_iter = 200) {
    const double flo = f(lo);
    const double fhi = f(hi);
    return bracketed_root(f, lo, hi, flo, fhi, width, what, max_iter);
}

/// Walks `lo` down from `hi` in doubling steps until f(lo) > 0 (f decreasing)
/// and returns the root in [lo, hi]. `fhi` must be f(hi) <= 0.
template <class F>
double root_below(F&& f, double hi, double fhi, double floor, double width, const char* what) {
    double step = 1.0;
    double lo = hi - step;
    double flo = f(lo);
    while (flo < 0.0) {
        step *= 2.0;
        lo = hi - step;
        if (lo < floor) {
            throw SolverFailure(std::string(what) + ": could not bracket the root from below",
                                {"hi=" + std::to_string(hi), "floor=" + std::to_string(floor)});
        }
        flo = f(lo);
    }
    return bracketed_root(f, lo, hi, flo, fhi, width, what);
}

/// c1 * t^e1 + c2 * t^e2 with c1, c2 >= 0 (not both zero) and e1, e2 > 0,
/// evaluated and inverted in log space. Strictly increasing in t.
struct PowerSum {
    double c1, e1, c2, e2;

    double log_value(double log_t) const noexcept {
        return log_add_exp(safe_log(c1) + e1 * log_t, safe_log(c2) + e2 * log_t);
    }

    /// d log_value / d log t, a convex combination of e1 and e2.
    double log_slope(double log_t) const noexcept {
        const double a = safe_log(c1) + e1 * log_t;
        const double b = safe_log(c2) + e2 * log_t;
        const double L = log_add_exp(a, b);
        return e1 * std::exp(a - L) + e2 * std::exp(b - L);
    }

    /// log t solving log_value(log t) = target.
    double solve_log(double target) const {
        // Each single term hits the target at y_i; the sum crosses it between
        // min_i y_i(target - log 2) and min_i y_i(target).
        auto single = [](double c, double e, double tgt) {
            return c > 0.0 ? (tgt - std::log(c)) / e : std::numeric_limits<double>::infinity();
        };
        const double hi = std::min(single(c1, e1, target), single(c2, e2, target));
        const double lo = std::min(single(c1, e1, target - std::log(2.0)),
                                   single(c2, e2, target - std::log(2.0)));
        if (!std::isfinite(hi) || !std::isfinite(lo)) {
            throw SolverFailure("PowerSum::solve_log: degenerate coefficients");
        }
        if (hi == lo) return hi;
        // Newton iterations from the right end converge monotonically (the
        // log-sum is convex in log t); finish with a bracketed solve.
        double y = hi;
        for (int i = 0; i < 60; ++i) {
            const double step = (log_value(y) - target) / log_slope(y);
            y -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(y))) return y;
        }
        const double width = 4.0 * std::numeric_limits<double>::epsilon() *
                             std::max({1.0, std::abs(lo), std::abs(hi)});
        return bracketed_root([&](double v) { return log_value(v) - target; }, lo, hi, width,
                              "PowerSum::solve_log");
    }
};

}  // namespace wavelock::numerics
