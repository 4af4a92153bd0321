#pragma once

// Problem parameters, derived constants, the concentration kernel G and
// regime classification for the two-budget localization-operator bound.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wavelock {

inline constexpr double kFourPi = 4.0 * std::numbers::pi;

/// Relative tolerance used to decide that B/A sits on a regime threshold.
inline constexpr double kBoundaryTolerance = 1e-12;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

/// Raised for p == q, where the two-multiplier system degenerates.
class EqualExponents : public InvalidParams {
public:
    EqualExponents() : InvalidParams("exponents must differ: p != q is required") {}
};

class RegimeMismatch : public Error {
public:
    using Error::Error;
};

class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, std::vector<std::string> diagnostics = {})
        : Error(what), diagnostics_(std::move(diagnostics)) {}

    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

class QuadratureFailure : public Error {
public:
    QuadratureFailure(const std::string& what, double estimate, double error_estimate)
        : Error(what + " (estimate " + std::to_string(estimate) + ", error " +
                std::to_string(error_estimate) + ")"),
          estimate_(estimate), error_estimate_(error_estimate) {}

    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

/// Which Lebesgue constraint a quantity refers to.
enum class Side { P, Q };

constexpr Side other(Side s) noexcept { return s == Side::P ? Side::Q : Side::P; }

constexpr std::string_view to_string(Side s) noexcept { return s == Side::P ? "P" : "Q"; }

/// One instance of the two-budget problem: ||F||_p <= A, ||F||_q <= B,
/// Cauchy wavelet of order beta.
struct ProblemParams {
    double beta = 0.5;
    double p = 2.0;
    double q = 4.0;
    double A = 1.0;
    double B = 1.0;

    double exponent(Side s) const noexcept { return s == Side::P ? p : q; }
    double budget(Side s) const noexcept { return s == Side::P ? A : B; }

    /// Throws InvalidParams (EqualExponents for p == q) when out of domain.
    void validate() const {
        auto finite_positive = [](double v) { return std::isfinite(v) && v > 0.0; };
        if (!finite_positive(beta)) throw InvalidParams("beta must be a positive finite number");
        if (!(std::isfinite(p) && p > 1.0)) throw InvalidParams("p must be a finite number > 1");
        if (!(std::isfinite(q) && q > 1.0)) throw InvalidParams("q must be a finite number > 1");
        if (p == q) throw EqualExponents();
        if (!finite_positive(A)) throw InvalidParams("A must be a positive finite number");
        if (!finite_positive(B)) throw InvalidParams("B must be a positive finite number");
    }

    /// The instance with the roles of (p, A) and (q, B) exchanged.
    ProblemParams swapped() const noexcept { return {beta, q, p, B, A}; }

    friend bool operator==(const ProblemParams&, const ProblemParams&) = default;
};

/// Parameters normalized so that p < q, remembering whether a swap happened.
struct CanonicalParams {
    ProblemParams params;
    bool swapped = false;
};

inline CanonicalParams canonicalize(const ProblemParams& params) {
    params.validate();
    if (params.p < params.q) return {params, false};
    return {params.swapped(), true};
}

inline double alpha_of(double beta, double e) noexcept { return (e - 1.0) / (2.0 * beta + 1.0); }
inline double sigma_of(double beta, double e) noexcept { return (e - 1.0) / (2.0 * beta * e + 1.0); }
inline double kappa_of(double e) noexcept { return (e - 1.0) / e; }

/// Exponent-dependent constants and the regime thresholds for B/A.
/// A threshold is std::nullopt when the corresponding cross norm diverges.
struct DerivedConstants {
    double alpha_p = 0, sigma_p = 0, kappa_p = 0;
    double alpha_q = 0, sigma_q = 0, kappa_q = 0;
    std::optional<double> r1;
    std::optional<double> r2;
    std::vector<std::string> diagnostics;

    double alpha(Side s) const noexcept { return s == Side::P ? alpha_p : alpha_q; }
    double sigma(Side s) const noexcept { return s == Side::P ? sigma_p : sigma_q; }
    double kappa(Side s) const noexcept { return s == Side::P ? kappa_p : kappa_q; }
};

/// r2 for exponents (p, q): the L^q norm of the L^p-extremal weight with unit
/// L^p budget, or nullopt when q <= alpha_p.
inline std::optional<double> upper_threshold(double beta, double p, double q) {
    const double ap = alpha_of(beta, p);
    if (!(q > ap)) return std::nullopt;
    const double sp = sigma_of(beta, p);
    // Evaluate as exp(log) to keep huge/small factors from overflowing.
    const double log_r = (1.0 / q - 1.0 / p) * std::log(kFourPi) +
                         (std::log(ap) - std::log(q - ap)) / q - std::log(sp) / p;
    return std::exp(log_r);
}

/// r1 for exponents (p, q); the reciprocal of r2 with the exponents swapped.
inline std::optional<double> lower_threshold(double beta, double p, double q) {
    const double aq = alpha_of(beta, q);
    if (!(p > aq)) return std::nullopt;
    const double sq = sigma_of(beta, q);
    const double log_r = (1.0 / q - 1.0 / p) * std::log(kFourPi) -
                         (std::log(aq) - std::log(p - aq)) / p + std::log(sq) / q;
    return std::exp(log_r);
}

inline DerivedConstants derive_constants(const ProblemParams& params) {
    params.validate();
    const double b = params.beta;
    DerivedConstants c;
    c.alpha_p = alpha_of(b, params.p);
    c.sigma_p = sigma_of(b, params.p);
    c.kappa_p = kappa_of(params.p);
    c.alpha_q = alpha_of(b, params.q);
    c.sigma_q = sigma_of(b, params.q);
    c.kappa_q = kappa_of(params.q);
    c.r1 = lower_threshold(b, params.p, params.q);
    c.r2 = upper_threshold(b, params.p, params.q);
    if (c.r1 && c.r2 && !(*c.r1 < *c.r2)) {
        c.diagnostics.push_back("threshold ordering violated: r1 = " + std::to_string(*c.r1) +
                                " is not below r2 = " + std::to_string(*c.r2));
    }
    return c;
}

enum class RegimeTag { SingleP, SingleQ, Dual };

constexpr std::string_view to_string(RegimeTag t) noexcept {
    switch (t) {
        case RegimeTag::SingleP: return "SingleP";
        case RegimeTag::SingleQ: return "SingleQ";
        case RegimeTag::Dual: return "Dual";
    }
    return "?";
}

inline std::optional<RegimeTag> regime_from_string(std::string_view s) {
    if (s == "SingleP") return RegimeTag::SingleP;
    if (s == "SingleQ") return RegimeTag::SingleQ;
    if (s == "Dual") return RegimeTag::Dual;
    return std::nullopt;
}

struct Regime {
    RegimeTag tag = RegimeTag::Dual;
    /// B/A equals r1 or r2 within kBoundaryTolerance (relative).
    bool boundary = false;

    friend bool operator==(const Regime&, const Regime&) = default;
};

/// Single-constraint regimes are closed: boundary points go to them.
inline Regime classify_regime(const ProblemParams& params, const DerivedConstants& consts) {
    const double ratio = params.B / params.A;
    auto on = [ratio](double r) { return std::abs(ratio - r) <= kBoundaryTolerance * r; };
    if (consts.r2 && (ratio >= *consts.r2 || on(*consts.r2))) {
        return {RegimeTag::SingleP, on(*consts.r2)};
    }
    if (consts.r1 && (ratio <= *consts.r1 || on(*consts.r1))) {
        return {RegimeTag::SingleQ, on(*consts.r1)};
    }
    return {RegimeTag::Dual, false};
}

/// G(s) = 1 - (1 + s/4pi)^(-2 beta), the sharp concentration bound for a set of
/// hyperbolic measure s.
inline double g_eval(double s, double beta) {
    if (!(s >= 0.0)) throw std::domain_error("g_eval: measure must be nonnegative");
    return -std::expm1(-2.0 * beta * std::log1p(s / kFourPi));
}

inline double g_prime(double s, double beta) {
    if (!(s >= 0.0)) throw std::domain_error("g_prime: measure must be nonnegative");
    return (2.0 * beta / kFourPi) * std::exp(-(2.0 * beta + 1.0) * std::log1p(s / kFourPi));
}

/// G''(s) <= 0; |G''| is maximal at s = 0.
inline double g_second(double s, double beta) {
    if (!(s >= 0.0)) throw std::domain_error("g_second: measure must be nonnegative");
    return -(2.0 * beta * (2.0 * beta + 1.0) / (kFourPi * kFourPi)) *
           std::exp(-(2.0 * beta + 2.0) * std::log1p(s / kFourPi));
}

}  // namespace wavelock
