#pragma once

// Dual-constraint regime: the extremal distribution function
//   u(t) = 4 pi max{(l1 t^(p-1) + l2 t^(q-1))^(-1/(2 beta + 1)) - 1, 0},
// its support endpoint T, the two moment integrals and the nested solve for
// the multipliers (l1, l2) that saturate both budgets.

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wavelock/closed_form.hpp"
#include "wavelock/core.hpp"
#include "wavelock/numerics.hpp"
#include "wavelock/quadrature.hpp"

namespace wavelock {

struct Multipliers {
    double lambda1 = 0.0;  ///< coefficient of t^(p-1)
    double lambda2 = 0.0;  ///< coefficient of t^(q-1)
    double T = 0.0;        ///< support endpoint of u

    Multipliers swapped() const noexcept { return {lambda2, lambda1, T}; }
};

namespace detail {

inline numerics::PowerSum power_sum(double l1, double l2, const ProblemParams& params) {
    if (!(l1 >= 0.0) || !(l2 >= 0.0) || (l1 == 0.0 && l2 == 0.0)) {
        throw InvalidParams("multipliers must be nonnegative and not both zero");
    }
    return {l1, params.p - 1.0, l2, params.q - 1.0};
}

/// Alpha of the term that dominates u near t = 0.
inline double dominant_alpha(double l1, double l2, const ProblemParams& params) {
    const double e = l1 > 0.0 && l2 > 0.0 ? std::min(params.p, params.q)
                     : l1 > 0.0          ? params.p
                                         : params.q;
    return alpha_of(params.beta, e);
}

/// t^(e-1) * u(t) / (4 pi) from log t, accurate at both ends of (0, T].
inline double scaled_moment_density(const numerics::PowerSum& ps, double log_t, double e,
                                    double inv_k) {
    const double x = -ps.log_value(log_t) * inv_k;
    if (x <= 0.0) return 0.0;
    const double log_pow = (e - 1.0) * log_t;
    if (x > 30.0) return std::exp(log_pow + x) - std::exp(log_pow);
    return std::exp(log_pow) * std::expm1(x);
}

/// e * int t^(e-1) u dt when only one multiplier is nonzero: the profile is
/// then the single-constraint extremal one with amplitude mu.
inline double single_term_moment(double beta, double term_exponent, double lambda, double e) {
    const double a = alpha_of(beta, term_exponent);
    if (!(e > a)) return std::numeric_limits<double>::infinity();
    const double mu = std::pow(lambda, -1.0 / (term_exponent - 1.0));
    return kFourPi * std::pow(mu, e) * a / (e - a);
}

/// Point where the two terms of the power sum are equal. Below it the lower
/// exponent dominates; when it sits far below T the clustered rule never
/// samples that region, so integrals over (0, T] are split there.
inline std::optional<double> crossover(double l1, double l2, const ProblemParams& params,
                                       double T) {
    if (!(l1 > 0.0) || !(l2 > 0.0)) return std::nullopt;
    const double t = std::exp((std::log(l1) - std::log(l2)) / (params.q - params.p));
    if (!(t > 0.0) || !(t < T)) return std::nullopt;
    return t;
}

/// int_0^T f(log t) dt, clustered at 0 with exponent k. Past the crossover
/// the integral runs in log t, where the integrand is smooth over many decades.
template <class F>
double integrate_profile(F&& f, double l1, double l2, double T, const ProblemParams& params,
                         double k, const QuadratureConfig& cfg, const char* what) {
    const auto split = crossover(l1, l2, params, T);
    auto clustered = [&](double b) {
        return integrate_clustered_or_throw([&](double, double log_t) { return f(log_t); }, 0.0,
                                            b, k, cfg, what);
    };
    if (!split) return clustered(T);
    const QuadratureResult far =
        integrate([&](double s) { return f(s) * std::exp(s); }, std::log(*split), std::log(T), cfg);
    if (!far.converged) {
        throw QuadratureFailure(std::string(what) + ": quadrature did not converge", far.value,
                                far.error);
    }
    return clustered(*split) + far.value;
}

}  // namespace detail

/// Unique root of l1 T^(p-1) + l2 T^(q-1) = 1.
inline double find_T(double lambda1, double lambda2, const ProblemParams& params) {
    return std::exp(detail::power_sum(lambda1, lambda2, params).solve_log(0.0));
}

inline Multipliers make_multipliers(double lambda1, double lambda2, const ProblemParams& params) {
    return {lambda1, lambda2, find_T(lambda1, lambda2, params)};
}

inline double u_eval(double t, const Multipliers& m, const ProblemParams& params) {
    if (!(t > 0.0)) throw std::domain_error("u_eval: t must be positive");
    const auto ps = detail::power_sum(m.lambda1, m.lambda2, params);
    const double x = -ps.log_value(std::log(t)) / (2.0 * params.beta + 1.0);
    return kFourPi * std::max(std::expm1(x), 0.0);
}

/// e * int_0^T t^(e-1) u(t) dt for e = p or q. Returns +inf when the integral
/// diverges at t = 0; throws QuadratureFailure on non-convergence.
inline double moment(const Multipliers& m, const ProblemParams& params, Side which,
                     const QuadratureConfig& cfg = {}) {
    const double e = params.exponent(which);
    const auto ps = detail::power_sum(m.lambda1, m.lambda2, params);
    const double a_dom = detail::dominant_alpha(m.lambda1, m.lambda2, params);
    if (!(e > a_dom)) return std::numeric_limits<double>::infinity();
    const double inv_k = 1.0 / (2.0 * params.beta + 1.0);
    const double k = std::clamp(std::max(2.0 * params.beta + 1.0, 2.0 / (e - a_dom)), 1.0, 400.0);
    const double value = detail::integrate_profile(
        [&](double log_t) { return detail::scaled_moment_density(ps, log_t, e, inv_k); },
        m.lambda1, m.lambda2, m.T, params, k, cfg, "moment");
    return e * kFourPi * value;
}

/// int_0^T G(u(t)) dt.
inline double bound_integral(const Multipliers& m, const ProblemParams& params,
                             const QuadratureConfig& cfg = {}) {
    const auto ps = detail::power_sum(m.lambda1, m.lambda2, params);
    const double b = params.beta;
    const double ratio = 2.0 * b / (2.0 * b + 1.0);
    // 1 + u/4pi = X^(-1/(2b+1)), so G(u) = 1 - X^(2b/(2b+1)).
    const double k = clustering_exponent(b, detail::dominant_alpha(m.lambda1, m.lambda2, params));
    return detail::integrate_profile(
        [&](double log_t) {
            const double L = ps.log_value(log_t);
            return L >= 0.0 ? 0.0 : -std::expm1(ratio * L);
        },
        m.lambda1, m.lambda2, m.T, params, k, cfg, "bound_integral");
}

struct MultiplierSolution {
    Multipliers multipliers;
    double residual_p = 0.0;  ///< |moment_p - A^p| / A^p
    double residual_q = 0.0;  ///< |moment_q - B^q| / B^q
    int outer_evaluations = 0;
    int moment_evaluations = 0;
};

namespace detail {

inline MultiplierSolution solve_canonical(const ProblemParams& params,
                                          const QuadratureConfig& cfg) {
    const double beta = params.beta;
    const double p = params.p;
    const double q = params.q;
    const double log_target_p = p * std::log(params.A);
    const double log_target_q = q * std::log(params.B);
    constexpr double kLogFloor = -700.0;
    constexpr double kWidth = 1e-13;

    MultiplierSolution sol;
    auto log_moment = [&](double l1, double l2, Side which) {
        ++sol.moment_evaluations;
        return std::log(moment(make_multipliers(l1, l2, params), params, which, cfg));
    };

    // Single-constraint anchors: at l2 = 0 the p-budget is met by l1_seed, and
    // at l1 = 0 the q-budget is met by l2_seed. Any positive partner multiplier
    // shrinks u pointwise, so these are upper brackets.
    const double l1_seed = std::pow(single_amplitude(beta, p, params.A), -(p - 1.0));
    const double l2_seed = std::pow(single_amplitude(beta, q, params.B), -(q - 1.0));

    // l1 solving moment_p = A^p for fixed l2 (moments decrease in l1).
    auto inner = [&](double y2) {
        const double l2 = std::exp(y2);
        // l1 = 0 gives the largest p-moment available for this l2.
        const double cap = detail::single_term_moment(beta, q, l2, p);
        if (std::log(cap) <= log_target_p) {
            throw SolverFailure("inner solve: p-budget unreachable with l1 >= 0",
                                {"log l2=" + std::to_string(y2)});
        }
        auto f = [&](double y1) { return log_moment(std::exp(y1), l2, Side::P) - log_target_p; };
        const double hi = std::log(l1_seed);
        const double fhi = f(hi);
        // l2 below quadrature resolution: the anchor already meets the budget.
        if (fhi >= 0.0) return hi;
        return numerics::root_below(f, hi, fhi, kLogFloor, kWidth, "inner multiplier solve");
    };

    auto outer = [&](double y2) {
        ++sol.outer_evaluations;
        const double y1 = inner(y2);
        return log_moment(std::exp(y1), std::exp(y2), Side::Q) - log_target_q;
    };

    const double hi = std::log(l2_seed);
    const double fhi = outer(hi);
    // Just above r1 the p-multiplier is too small to move the q-moment by more
    // than rounding, so the anchor itself is the root.
    const double y2 = fhi >= 0.0 ? hi
                                 : numerics::root_below(outer, hi, fhi, kLogFloor, kWidth,
                                                        "outer multiplier solve");
    const double y1 = inner(y2);
    sol.multipliers = make_multipliers(std::exp(y1), std::exp(y2), params);
    const double mp = moment(sol.multipliers, params, Side::P, cfg);
    const double mq = moment(sol.multipliers, params, Side::Q, cfg);
    sol.residual_p = std::abs(mp - std::pow(params.A, p)) / std::pow(params.A, p);
    sol.residual_q = std::abs(mq - std::pow(params.B, q)) / std::pow(params.B, q);
    return sol;
}

}  // namespace detail

/// Multipliers saturating both budgets. Requires the Dual regime.
inline MultiplierSolution solve_multipliers(const ProblemParams& params,
                                            const DerivedConstants& consts,
                                            const QuadratureConfig& cfg = {}) {
    cfg.validate();
    const Regime regime = classify_regime(params, consts);
    if (regime.tag != RegimeTag::Dual) {
        throw RegimeMismatch("solve_multipliers requires the Dual regime, got " +
                             std::string(to_string(regime.tag)));
    }
    const CanonicalParams canon = canonicalize(params);
    MultiplierSolution sol = detail::solve_canonical(canon.params, cfg);
    if (canon.swapped) {
        sol.multipliers = sol.multipliers.swapped();
        std::swap(sol.residual_p, sol.residual_q);
    }
    return sol;
}

struct BoundReport {
    ProblemParams params;
    Regime regime;
    double bound = 0.0;
    std::optional<double> r1;
    std::optional<double> r2;
    /// In single regimes the inactive multiplier is recorded as exactly 0.
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    /// Support endpoint; absent in single regimes.
    std::optional<double> T;
    /// Relative moment residuals of the active constraints.
    std::optional<double> residual_p;
    std::optional<double> residual_q;
    /// Norm of the single-regime extremal weight in the inactive exponent.
    std::optional<double> cross_norm;
    double wall_time_ms = 0.0;
    std::vector<std::string> diagnostics;

    Multipliers multipliers() const {
        if (T) return {lambda1, lambda2, *T};
        return make_multipliers(lambda1, lambda2, params);
    }
};

inline BoundReport compute_bound(const ProblemParams& params, const QuadratureConfig& cfg = {}) {
    const auto start = std::chrono::steady_clock::now();
    params.validate();
    cfg.validate();
    const DerivedConstants consts = derive_constants(params);

    BoundReport rep;
    rep.params = params;
    rep.regime = classify_regime(params, consts);
    rep.r1 = consts.r1;
    rep.r2 = consts.r2;
    rep.diagnostics = consts.diagnostics;

    if (rep.regime.tag == RegimeTag::Dual) {
        MultiplierSolution sol;
        try {
            sol = solve_multipliers(params, consts, cfg);
        } catch (const SolverFailure& e) {
            auto diag = e.diagnostics();
            diag.insert(diag.begin(), "B/A=" + std::to_string(params.B / params.A));
            throw SolverFailure(std::string("Dual regime solve failed: ") + e.what(), diag);
        }
        rep.lambda1 = sol.multipliers.lambda1;
        rep.lambda2 = sol.multipliers.lambda2;
        rep.T = sol.multipliers.T;
        rep.residual_p = sol.residual_p;
        rep.residual_q = sol.residual_q;
        rep.bound = bound_integral(sol.multipliers, params, cfg);
    } else {
        const Side side = rep.regime.tag == RegimeTag::SingleP ? Side::P : Side::Q;
        const SingleConstraintResult single = single_bound(params, consts, side);
        const double e = params.exponent(side);
        const double lam = std::pow(single.lambda, -(e - 1.0));
        rep.lambda1 = side == Side::P ? lam : 0.0;
        rep.lambda2 = side == Side::Q ? lam : 0.0;
        rep.bound = single.bound;
        rep.cross_norm = single.cross_norm;
        const Multipliers m{rep.lambda1, rep.lambda2, single.lambda};
        const double target = std::pow(params.budget(side), e);
        const double residual = std::abs(moment(m, params, side, cfg) - target) / target;
        (side == Side::P ? rep.residual_p : rep.residual_q) = residual;
    }
    rep.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return rep;
}

}  // namespace wavelock
