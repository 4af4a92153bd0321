#pragma once

// Extremal weights on the upper half-plane. Their magnitude is radial around a
// centre z0 in the pseudo-hyperbolic coordinate d(z, z0) = |z - z0|^2 / |z - conj(z0)|^2,
// and each super-level set {|F| > t} is the disc whose nu-measure is u(t).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>

#include "wavelock/closed_form.hpp"
#include "wavelock/core.hpp"
#include "wavelock/profile.hpp"
#include "wavelock/quadrature.hpp"
#include "wavelock/solver.hpp"

namespace wavelock {

struct HalfPlanePoint {
    double x = 0.0;
    double y = 1.0;

    void validate() const {
        if (!(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
            throw InvalidParams("half-plane point needs finite x and y > 0");
        }
    }
};

/// 1 - d(z, z0) = 4 y y0 / |z - conj(z0)|^2, exact near the boundary.
inline double pseudo_hyperbolic_gap(const HalfPlanePoint& z, const HalfPlanePoint& z0) {
    const double dx = z.x - z0.x;
    const double sy = z.y + z0.y;
    return 4.0 * z.y * z0.y / (dx * dx + sy * sy);
}

inline double pseudo_hyperbolic(const HalfPlanePoint& z, const HalfPlanePoint& z0) {
    const double dx = z.x - z0.x;
    const double dy = z.y - z0.y;
    const double sy = z.y + z0.y;
    return (dx * dx + dy * dy) / (dx * dx + sy * sy);
}

/// psi at s = (1 - gap) / gap: the t in (0, T] whose super-level disc has
/// boundary gap `gap`, i.e. l1 t^(p-1) + l2 t^(q-1) = gap^(2 beta + 1).
inline double psi_from_gap(double gap, const Multipliers& m, const ProblemParams& params) {
    if (gap >= 1.0) return m.T;
    if (gap <= 0.0) return 0.0;
    const auto ps = detail::power_sum(m.lambda1, m.lambda2, params);
    return std::exp(ps.solve_log((2.0 * params.beta + 1.0) * std::log(gap)));
}

/// Inverse of t -> (l1 t^(p-1) + l2 t^(q-1))^(-1/(2 beta + 1)) - 1 on (0, T].
inline double psi_inverse(double s, const Multipliers& m, const ProblemParams& params) {
    if (!(s >= 0.0)) throw std::domain_error("psi_inverse: argument must be nonnegative");
    if (std::isinf(s)) return 0.0;
    const auto ps = detail::power_sum(m.lambda1, m.lambda2, params);
    return std::exp(ps.solve_log(-(2.0 * params.beta + 1.0) * std::log1p(s)));
}

/// The map psi inverts: u(t) / 4 pi on (0, T].
inline double psi_forward(double t, const Multipliers& m, const ProblemParams& params) {
    return u_eval(t, m, params) / kFourPi;
}

/// e^(i phase) times a radial magnitude around `center`. In single modes the
/// magnitude is lambda (1 - d)^(1/alpha_e); in Dual mode it is psi(d / (1 - d)).
struct ExtremalWeight {
    ProblemParams params;
    HalfPlanePoint center;
    double phase = 0.0;
    RegimeTag mode = RegimeTag::Dual;
    double lambda = 0.0;       ///< single modes: peak amplitude
    Multipliers multipliers;  ///< Dual mode

    static ExtremalWeight from_report(const BoundReport& rep, HalfPlanePoint center = {},
                                      double phase = 0.0) {
        center.validate();
        ExtremalWeight w;
        w.params = rep.params;
        w.center = center;
        w.phase = phase;
        w.mode = rep.regime.tag;
        switch (w.mode) {
            case RegimeTag::Dual:
                w.multipliers = rep.multipliers();
                break;
            case RegimeTag::SingleP:
                w.lambda = single_amplitude(rep.params.beta, rep.params.p, rep.params.A);
                break;
            case RegimeTag::SingleQ:
                w.lambda = single_amplitude(rep.params.beta, rep.params.q, rep.params.B);
                break;
        }
        return w;
    }

    double single_alpha() const {
        return alpha_of(params.beta, mode == RegimeTag::SingleP ? params.p : params.q);
    }

    /// Alpha governing the decay of the magnitude toward the boundary.
    double decay_alpha() const {
        if (mode != RegimeTag::Dual) return single_alpha();
        return detail::dominant_alpha(multipliers.lambda1, multipliers.lambda2, params);
    }

    double magnitude_at_gap(double gap) const {
        if (gap <= 0.0) return 0.0;
        if (mode == RegimeTag::Dual) return psi_from_gap(gap, multipliers, params);
        return lambda * std::pow(std::min(gap, 1.0), 1.0 / single_alpha());
    }

    double peak() const { return mode == RegimeTag::Dual ? multipliers.T : lambda; }

    RadialProfile profile() const {
        const ExtremalWeight self = *this;
        if (mode == RegimeTag::Dual) {
            return RadialProfile(
                [self](double gap) { return self.magnitude_at_gap(gap); },
                [self](double t) {
                    if (t >= self.multipliers.T) return 1.0;
                    if (t <= 0.0) return 0.0;
                    const auto ps = detail::power_sum(self.multipliers.lambda1,
                                                      self.multipliers.lambda2, self.params);
                    return std::exp(ps.log_value(std::log(t)) / (2.0 * self.params.beta + 1.0));
                });
        }
        const double a = single_alpha();
        const double lam = lambda;
        return RadialProfile([=](double gap) { return lam * std::pow(gap, 1.0 / a); },
                             [=](double t) { return t >= lam ? 1.0 : std::pow(t / lam, a); });
    }
};

/// Magnitudes within 1e-14 of the boundary (d > 1 - 1e-14) are reported as 0.
inline constexpr double kBoundaryGapCutoff = 1e-14;

inline std::complex<double> eval_weight(const ExtremalWeight& w, const HalfPlanePoint& z) {
    z.validate();
    const double gap = pseudo_hyperbolic_gap(z, w.center);
    if (gap < kBoundaryGapCutoff) return {0.0, 0.0};
    return std::polar(w.magnitude_at_gap(gap), w.phase);
}

/// ||F||_e for a radial profile, by the one-dimensional reduction
///   ||F||_e^e = int_0^1 |rho(d)|^e 4 pi / (1 - d)^2 dd,
/// integrated in the gap variable with nodes clustered at the boundary.
/// `decay_alpha` describes the boundary decay rho ~ (1 - d)^(1/decay_alpha).
/// When the decay exponent changes at some gap far below 1, pass it as
/// `split_gap`; the rest is then integrated in log gap.
inline double profile_norm(const RadialProfile& profile, double e, double decay_alpha,
                           const QuadratureConfig& cfg = {},
                           std::optional<double> split_gap = std::nullopt) {
    if (profile.peak() <= 0.0) return 0.0;
    const double excess = e / decay_alpha - 1.0;
    if (!(excess > 0.0)) return std::numeric_limits<double>::infinity();
    const double k = std::clamp(2.0 / excess, 1.0, 60.0);
    auto density = [&](double gap, double log_gap) {
        if (gap <= 0.0) return 0.0;
        const double m = profile.at_gap(gap);
        if (m <= 0.0) return 0.0;
        return std::exp(e * std::log(m) - 2.0 * log_gap);
    };
    const bool split = split_gap && *split_gap > 0.0 && *split_gap < 1.0;
    double value = integrate_clustered_or_throw(density, 0.0, split ? *split_gap : 1.0, k, cfg,
                                                "profile_norm");
    if (split) {
        const QuadratureResult far = integrate(
            [&](double s) { return density(std::exp(s), s) * std::exp(s); },
            std::log(*split_gap), 0.0, cfg);
        if (!far.converged) {
            throw QuadratureFailure("profile_norm: quadrature did not converge", far.value,
                                    far.error);
        }
        value += far.value;
    }
    return std::pow(kFourPi * value, 1.0 / e);
}

struct WeightNorms {
    double p_norm = 0.0;
    double q_norm = 0.0;
};

inline WeightNorms weight_norms(const ExtremalWeight& w, const QuadratureConfig& cfg = {}) {
    const RadialProfile prof = w.profile();
    const double a = w.decay_alpha();
    std::optional<double> split;
    if (w.mode == RegimeTag::Dual) {
        const Multipliers& m = w.multipliers;
        if (const auto t = detail::crossover(m.lambda1, m.lambda2, w.params, m.T)) {
            // gap^(2 beta + 1) = l1 t^(p-1) + l2 t^(q-1) = 2 l1 t^(p-1) at the crossover
            split = std::exp((std::log(2.0 * m.lambda1) + (w.params.p - 1.0) * std::log(*t)) /
                             (2.0 * w.params.beta + 1.0));
        }
    }
    return {profile_norm(prof, w.params.p, a, cfg, split),
            profile_norm(prof, w.params.q, a, cfg, split)};
}

}  // namespace wavelock
