#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature with an optional power-law
// change of variables that removes integrable endpoint singularities.

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wavelock/core.hpp"

namespace wavelock {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    /// Maximum number of interval bisections.
    int max_subdivisions = 60;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
            throw InvalidParams("quadrature tolerances must be positive");
        }
        if (max_subdivisions < 10) throw InvalidParams("max_subdivisions must be at least 10");
    }
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

namespace detail {

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const noexcept { return error < o.error; }
};

template <class F>
Panel gk15_panel(F& f, double a, double b) {
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
    using gauss = boost::math::quadrature::gauss<double, 7>;
    const auto& x = kronrod::abscissa();
    const auto& wk = kronrod::weights();
    const auto& wg = gauss::weights();

    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k = wk[0] * fc;
    double g = wg[0] * fc;
    double fv[8][2];
    fv[0][0] = fv[0][1] = fc;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double f1 = f(c - h * x[i]);
        const double f2 = f(c + h * x[i]);
        fv[i][0] = f1;
        fv[i][1] = f2;
        k += wk[i] * (f1 + f2);
        if (i % 2 == 0) g += wg[i / 2] * (f1 + f2);
    }
    // QUADPACK-style error estimate.
    const double mean = 0.5 * k;
    double asc = wk[0] * std::abs(fc - mean);
    for (std::size_t i = 1; i < x.size(); ++i) {
        asc += wk[i] * (std::abs(fv[i][0] - mean) + std::abs(fv[i][1] - mean));
    }
    asc *= std::abs(h);
    double err = std::abs((k - g) * h);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    return {a, b, k * h, err};
}

}  // namespace detail

/// Integrates f over [a, b]. Never throws for non-convergence; inspect
/// `converged`. Non-finite integrand values raise QuadratureFailure.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
    QuadratureResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    auto checked = [&f](double t) {
        const double v = f(t);
        if (!std::isfinite(v)) throw QuadratureFailure("non-finite integrand", t, v);
        return v;
    };
    std::priority_queue<detail::Panel> heap;
    heap.push(detail::gk15_panel(checked, a, b));
    double value = heap.top().value;
    double error = heap.top().error;
    int splits = 0;
    while (error > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value)) &&
           splits < cfg.max_subdivisions) {
        const detail::Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const detail::Panel left = detail::gk15_panel(checked, worst.a, mid);
        const detail::Panel right = detail::gk15_panel(checked, mid, worst.b);
        heap.push(left);
        heap.push(right);
        ++splits;
        // Re-sum from scratch every few steps to avoid drift in the totals.
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        if (splits % 16 == 0) {
            auto copy = heap;
            value = error = 0.0;
            while (!copy.empty()) {
                value += copy.top().value;
                error += copy.top().error;
                copy.pop();
            }
        }
    }
    out.value = value;
    out.error = error;
    out.subdivisions = splits;
    out.converged = error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
    return out;
}

/// Integrates over [a, b] after substituting t = a + (b - a) tau^k, which
/// clusters nodes at `a`. The integrand receives (t, log(t - a)) so callers
/// can stay accurate when t - a underflows.
template <class F>
QuadratureResult integrate_clustered(F&& f, double a, double b, double k,
                                     const QuadratureConfig& cfg = {}) {
    const double log_len = std::log(b - a);
    const double log_k = std::log(k);
    auto mapped = [&](double tau) {
        if (tau <= 0.0) return 0.0;
        const double log_tau = std::log(tau);
        const double log_offset = log_len + k * log_tau;
        const double t = a + std::exp(log_offset);
        const double jac_log = log_len + log_k + (k - 1.0) * log_tau;
        const double v = f(t, log_offset);
        if (v == 0.0) return 0.0;
        return v * std::exp(jac_log);
    };
    return integrate(mapped, 0.0, 1.0, cfg);
}

/// Like integrate_clustered but throws QuadratureFailure when the tolerance
/// is not reached.
template <class F>
double integrate_clustered_or_throw(F&& f, double a, double b, double k,
                                    const QuadratureConfig& cfg, const char* what) {
    const QuadratureResult r = integrate_clustered(std::forward<F>(f), a, b, k, cfg);
    if (!r.converged) {
        throw QuadratureFailure(std::string(what) + ": quadrature did not converge", r.value,
                                r.error);
    }
    return r.value;
}

}  // namespace wavelock
