#pragma once

// Single-active-constraint regime: closed-form bound, extremal profile,
// its distribution function and its cross norm.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "wavelock/core.hpp"
#include "wavelock/profile.hpp"
#include "wavelock/quadrature.hpp"

namespace wavelock {

/// Peak value lambda = budget * (4 pi sigma_e)^(-1/e) of the extremal weight
/// for a lone L^e constraint.
inline double single_amplitude(double beta, double e, double budget) {
    return budget * std::pow(kFourPi * sigma_of(beta, e), -1.0 / e);
}

/// 2 beta (4 pi)^(-1/e) sigma_e^kappa_e * budget.
inline double single_bound_value(double beta, double e, double budget) {
    return 2.0 * beta * std::pow(kFourPi, -1.0 / e) *
           std::pow(sigma_of(beta, e), kappa_of(e)) * budget;
}

/// Norm in L^other of the L^e-extremal weight with amplitude lambda, or
/// nullopt when other <= alpha_e (the integral diverges at the boundary).
inline std::optional<double> single_cross_norm(double beta, double e, double other,
                                               double lambda) {
    const double a = alpha_of(beta, e);
    if (!(other > a)) return std::nullopt;
    return lambda * std::pow(kFourPi * a / (other - a), 1.0 / other);
}

struct SingleConstraintResult {
    double bound = 0.0;
    double lambda = 0.0;
    Side side = Side::P;
    std::optional<double> cross_norm;
};

/// Closed-form bound when only the `side` constraint binds. Throws
/// RegimeMismatch when the other constraint would be violated by the
/// single-constraint extremal weight.
inline SingleConstraintResult single_bound(const ProblemParams& params,
                                           const DerivedConstants& consts, Side side) {
    params.validate();
    const Regime regime = classify_regime(params, consts);
    const RegimeTag wanted = side == Side::P ? RegimeTag::SingleP : RegimeTag::SingleQ;
    if (regime.tag != wanted) {
        throw RegimeMismatch("single_bound(" + std::string(to_string(side)) +
                             ") requested but the instance is in regime " +
                             std::string(to_string(regime.tag)));
    }
    SingleConstraintResult r;
    r.side = side;
    const double e = params.exponent(side);
    r.lambda = single_amplitude(params.beta, e, params.budget(side));
    r.bound = single_bound_value(params.beta, e, params.budget(side));
    r.cross_norm = single_cross_norm(params.beta, e, params.exponent(other(side)), r.lambda);
    return r;
}

/// The extremal magnitude lambda (1 - d)^(1/alpha_e).
inline RadialProfile single_profile(const DerivedConstants& consts, double lambda, Side side) {
    const double a = consts.alpha(side);
    if (!(a > 0.0)) throw InvalidParams("single_profile: alpha must be positive");
    if (!(lambda > 0.0)) throw InvalidParams("single_profile: lambda must be positive");
    return RadialProfile([=](double gap) { return lambda * std::pow(gap, 1.0 / a); },
                         [=](double t) { return t >= lambda ? 1.0 : std::pow(t / lambda, a); });
}

/// Node-clustering exponent for t-integrals over (0, peak] whose integrands
/// behave like 1 - c t^(2 beta alpha) near t = 0.
inline double clustering_exponent(double beta, double alpha) {
    return std::clamp(std::max(2.0 * beta + 1.0, 1.0 / (2.0 * beta * alpha)), 1.0, 400.0);
}

/// Layer-cake form of the bound functional: integral of G(v(t)) dt.
inline double layer_cake_bound(const DistributionFunction& v, double beta, double k,
                               const QuadratureConfig& cfg = {}) {
    if (v.peak() <= 0.0) return 0.0;
    return integrate_clustered_or_throw(
        [&](double t, double) { return t <= 0.0 ? 1.0 : g_eval(v(t), beta); }, 0.0, v.peak(), k,
        cfg, "layer_cake_bound");
}

/// e * integral of t^(e-1) v(t) dt, which equals ||F||_e^e.
inline double layer_cake_moment(const DistributionFunction& v, double e, double k,
                                const QuadratureConfig& cfg = {}) {
    if (v.peak() <= 0.0) return 0.0;
    return integrate_clustered_or_throw(
        [&](double t, double log_t) {
            if (t <= 0.0) return 0.0;
            const double m = v(t);
            if (std::isinf(m)) return 0.0;
            return e * std::exp((e - 1.0) * log_t) * m;
        },
        0.0, v.peak(), k, cfg, "layer_cake_moment");
}

struct MomentCheck {
    /// nullopt marks a divergent moment.
    std::optional<double> computed;
    std::optional<double> expected;

    std::optional<double> relative_residual() const {
        if (!computed || !expected) return std::nullopt;
        return std::abs(*computed - *expected) / *expected;
    }
};

struct MomentReport {
    MomentCheck own;    ///< e * int t^(e-1) v = 4 pi sigma_e lambda^e
    MomentCheck cross;  ///< same with the other exponent
};

/// Numerically integrates both moments of the single-constraint extremal
/// profile's distribution function and compares them with the closed forms.
inline MomentReport verify_moment_identities(const ProblemParams& params,
                                             const DerivedConstants& consts, double lambda,
                                             Side side, const QuadratureConfig& cfg = {}) {
    const double b = params.beta;
    const double e = params.exponent(side);
    const double o = params.exponent(other(side));
    const double a = consts.alpha(side);
    const DistributionFunction v = distribution_of_profile(single_profile(consts, lambda, side));
    const double k = clustering_exponent(b, a);

    MomentReport rep;
    rep.own.expected = kFourPi * consts.sigma(side) * std::pow(lambda, e);
    rep.own.computed = layer_cake_moment(v, e, k, cfg);
    if (o > a) {
        rep.cross.expected = kFourPi * std::pow(lambda, o) * a / (o - a);
        const double k_cross = std::clamp(std::max(k, 2.0 / (o - a)), 1.0, 400.0);
        rep.cross.computed = layer_cake_moment(v, o, k_cross, cfg);
    }
    return rep;
}

}  // namespace wavelock
