#pragma once

// Brute-force solver for the discretized variational problem
//
//   maximize  sum_i G(v_i) D_i
//   s.t.      p sum_i t_i^(p-1) v_i D_i <= A^p,
//             q sum_i t_i^(q-1) v_i D_i <= B^q,   v_i >= 0,
//
// on a log-spaced grid. It uses nothing from the analytic solver: only G, its
// derivatives and a projection onto the feasible polyhedron.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "wavelock/core.hpp"
#include "wavelock/numerics.hpp"

namespace wavelock {

struct DiscreteProblem {
    ProblemParams params;
    std::vector<double> t;        ///< strictly increasing samples
    std::vector<double> weights;  ///< quadrature weights D_i
    double budget_p = 0.0;        ///< A^p
    double budget_q = 0.0;        ///< B^q

    std::size_t size() const noexcept { return t.size(); }

    /// n log-spaced points on [t_min_ratio * t_max, t_max] with trapezoid weights.
    static DiscreteProblem log_spaced(const ProblemParams& params, std::size_t n, double t_max,
                                      double t_min_ratio = 1e-6) {
        params.validate();
        if (n < 100) throw InvalidParams("discrete problem needs at least 100 grid points");
        if (!(t_max > 0.0) || !(t_min_ratio > 0.0 && t_min_ratio < 1.0)) {
            throw InvalidParams("discrete grid needs t_max > 0 and 0 < t_min_ratio < 1");
        }
        DiscreteProblem prob;
        prob.params = params;
        prob.budget_p = std::pow(params.A, params.p);
        prob.budget_q = std::pow(params.B, params.q);
        prob.t.resize(n);
        const double log_lo = std::log(t_min_ratio * t_max);
        const double log_hi = std::log(t_max);
        for (std::size_t i = 0; i < n; ++i) {
            prob.t[i] = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) /
                                              static_cast<double>(n - 1));
        }
        prob.t.back() = t_max;
        prob.weights.assign(n, 0.0);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double h = 0.5 * (prob.t[i + 1] - prob.t[i]);
            prob.weights[i] += h;
            prob.weights[i + 1] += h;
        }
        return prob;
    }

    void validate() const {
        params.validate();
        if (t.size() < 100 || weights.size() != t.size()) {
            throw InvalidParams("discrete problem needs >= 100 samples with matching weights");
        }
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (!(t[i] > 0.0) || !(weights[i] > 0.0) || (i > 0 && !(t[i] > t[i - 1]))) {
                throw InvalidParams("discrete grid must be positive and strictly increasing");
            }
        }
    }

    /// e * sum t_i^(e-1) v_i D_i for e = p or q.
    double moment(const std::vector<double>& v, Side which) const {
        const double e = params.exponent(which);
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            s += e * std::pow(t[i], e - 1.0) * v[i] * weights[i];
        }
        return s;
    }

    double objective(const std::vector<double>& v) const {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) s += g_eval(std::max(v[i], 0.0), params.beta) * weights[i];
        return s;
    }
};

struct OracleConfig {
    int max_iterations = 4000;
    /// Stop once the ascent certificate g.d falls below tolerance * objective.
    double tolerance = 1e-13;
    bool monotone_projection = true;
    double armijo = 1e-4;
};

struct DiscreteSolution {
    std::vector<double> values;
    double objective = 0.0;
    double moment_p = 0.0;
    double moment_q = 0.0;
    /// moment / budget - 1; nonpositive when feasible.
    double residual_p = 0.0;
    double residual_q = 0.0;
    int iterations = 0;
    bool converged = false;
    bool constraints_inactive = false;
    std::vector<std::string> diagnostics;
};

/// Weighted least-squares projection onto nonincreasing sequences
/// (pool-adjacent-violators).
inline std::vector<double> pava_nonincreasing(const std::vector<double>& values,
                                              const std::vector<double>& weights) {
    struct Block {
        double mean, weight;
        std::size_t count;
    };
    std::vector<Block> blocks;
    blocks.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        blocks.push_back({values[i], weights[i], 1});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].mean < blocks.back().mean) {
            const Block top = blocks.back();
            blocks.pop_back();
            Block& below = blocks.back();
            const double w = below.weight + top.weight;
            below.mean = (below.mean * below.weight + top.mean * top.weight) / w;
            below.weight = w;
            below.count += top.count;
        }
    }
    std::vector<double> out;
    out.reserve(values.size());
    for (const Block& b : blocks) out.insert(out.end(), b.count, b.mean);
    return out;
}

namespace detail {

/// Projection onto {v >= 0, a.v <= ca, b.v <= cb} in the norm sum h_i x_i^2
/// (a, b > 0), through the dual: x(mu) = max(z - (mu1 a + mu2 b) / h, 0).
/// For fixed mu2 the best mu1 is the smallest one meeting the a-constraint;
/// along that curve the b-moment is the derivative of a concave function of
/// mu2, hence nonincreasing, so both levels are monotone 1-D roots.
inline void project_moments(std::vector<double>& x, const std::vector<double>& h,
                            const std::vector<double>& a, double ca, const std::vector<double>& b,
                            double cb) {
    const std::size_t n = x.size();
    const std::vector<double> z = x;
    auto dot = [&](const std::vector<double>& c, double m1, double m2) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += c[i] * std::max(z[i] - (m1 * a[i] + m2 * b[i]) / h[i], 0.0);
        }
        return s;
    };
    // Smallest m >= 0 with g(m) <= 0 for nonincreasing g.
    auto smallest = [](auto&& g, const char* what) {
        const double g0 = g(0.0);
        if (g0 <= 0.0) return 0.0;
        double lo = 0.0, hi = 1.0, ghi = g(hi);
        while (ghi > 0.0) {
            lo = hi;
            hi *= 4.0;
            if (!std::isfinite(hi)) throw SolverFailure(std::string(what) + ": no upper bracket");
            ghi = g(hi);
        }
        const double glo = lo == 0.0 ? g0 : g(lo);
        return numerics::bracketed_root(g, lo, hi, glo, ghi,
                                        4.0 * std::numeric_limits<double>::epsilon() * hi, what);
    };
    auto best_m1 = [&](double m2) {
        return smallest([&](double m1) { return dot(a, m1, m2) - ca; }, "projection (a)");
    };
    const double m2 =
        smallest([&](double m) { return dot(b, best_m1(m), m) - cb; }, "projection (b)");
    const double m1 = best_m1(m2);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::max(z[i] - (m1 * a[i] + m2 * b[i]) / h[i], 0.0);
}

/// Scales v down (never up) until both moment constraints hold, after
/// clipping negative entries.
inline void restore_feasibility(const DiscreteProblem& prob, std::vector<double>& v) {
    for (double& x : v) x = std::max(x, 0.0);
    const double mp = prob.moment(v, Side::P);
    const double mq = prob.moment(v, Side::Q);
    double s = 1.0;
    if (mp > prob.budget_p) s = std::min(s, prob.budget_p / mp);
    if (mq > prob.budget_q) s = std::min(s, prob.budget_q / mq);
    if (s < 1.0) {
        for (double& x : v) x *= s;
    }
}

}  // namespace detail

/// Maximizes the discrete objective by scaled gradient projection: each step
/// moves to the projection (in the metric of the diagonal Hessian) of the
/// Newton point, followed by an Armijo backtrack along that direction.
inline DiscreteSolution solve_discrete(const DiscreteProblem& prob, const OracleConfig& cfg = {}) {
    prob.validate();
    const std::size_t n = prob.size();
    const double beta = prob.params.beta;
    const double p = prob.params.p;
    const double q = prob.params.q;

    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = p * std::pow(prob.t[i], p - 1.0) * prob.weights[i];
        b[i] = q * std::pow(prob.t[i], q - 1.0) * prob.weights[i];
    }

    DiscreteSolution sol;
    std::vector<double> v(n, 0.0), grad(n), h(n), target(n), trial(n);
    double f = prob.objective(v);
    for (int it = 0; it < cfg.max_iterations; ++it) {
        sol.iterations = it + 1;
        for (std::size_t i = 0; i < n; ++i) {
            grad[i] = prob.weights[i] * g_prime(v[i], beta);
            h[i] = -prob.weights[i] * g_second(v[i], beta);
            target[i] = v[i] + grad[i] / h[i];
        }
        detail::project_moments(target, h, a, prob.budget_p, b, prob.budget_q);
        detail::restore_feasibility(prob, target);

        double slope = 0.0;
        for (std::size_t i = 0; i < n; ++i) slope += grad[i] * (target[i] - v[i]);
        if (slope <= cfg.tolerance * std::abs(f)) {
            sol.converged = true;
            break;
        }
        double step = 1.0;
        double f_trial = 0.0;
        for (int k = 0; k < 60; ++k) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = v[i] + step * (target[i] - v[i]);
            f_trial = prob.objective(trial);
            if (f_trial >= f + cfg.armijo * step * slope) break;
            step *= 0.5;
        }
        if (!(f_trial >= f)) {
            sol.diagnostics.push_back("line search failed to ascend at iteration " +
                                      std::to_string(it));
            break;
        }
        v.swap(trial);
        f = f_trial;
    }
    if (!sol.converged) {
        sol.diagnostics.push_back("iteration budget exhausted before the ascent certificate "
                                  "fell below tolerance");
    }

    if (cfg.monotone_projection) {
        v = pava_nonincreasing(v, prob.weights);
        detail::restore_feasibility(prob, v);
    }
    sol.values = std::move(v);
    sol.objective = prob.objective(sol.values);
    sol.moment_p = prob.moment(sol.values, Side::P);
    sol.moment_q = prob.moment(sol.values, Side::Q);
    sol.residual_p = sol.moment_p / prob.budget_p - 1.0;
    sol.residual_q = sol.moment_q / prob.budget_q - 1.0;
    if (sol.residual_p < -1e-6 && sol.residual_q < -1e-6) {
        sol.constraints_inactive = true;
        sol.diagnostics.push_back("constraints inactive: both moments are below their budgets");
    }
    return sol;
}

struct MonotoneReport {
    /// Largest increase v_{i+1} - v_i, relative to max_i v_i.
    double max_relative_increase = 0.0;
    std::size_t increasing_pairs = 0;
};

/// Measures how far a solution computed without the monotone projection is
/// from being nonincreasing.
inline MonotoneReport check_monotone_restoration(const DiscreteSolution& sol) {
    MonotoneReport rep;
    const auto& v = sol.values;
    if (v.empty()) return rep;
    const double top = *std::max_element(v.begin(), v.end());
    if (!(top > 0.0)) return rep;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double rise = v[i + 1] - v[i];
        if (rise > 0.0) {
            ++rep.increasing_pairs;
            rep.max_relative_increase = std::max(rep.max_relative_increase, rise / top);
        }
    }
    return rep;
}

}  // namespace wavelock
