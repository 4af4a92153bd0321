#pragma once

// Reference values produced by tests/oracles/reference_values.py (mpmath,
// 50 digits), which shares no code with the library.

#include <cmath>
#include <vector>

#include "wavelock/core.hpp"
#include "wavelock/weight.hpp"

namespace wavelock::testing {

namespace ref {

// beta = 0.5, p = 2, q = 4
inline constexpr double r1 = 0.26988249672676429;
inline constexpr double r2 = 0.56556646641609209;
inline constexpr double single_p_bound = 0.16286750396763997;  // A = 1, equals 1/sqrt(12 pi)
inline constexpr double single_q_bound = 0.36208536517104566;  // B = 1
inline constexpr double single_p_lambda = 0.48860251190291992;  // A = 1

// Dual instance beta = 0.5, p = 2, q = 4, A = 1, B = 0.4
inline const ProblemParams dual{0.5, 2.0, 4.0, 1.0, 0.4};
inline constexpr double dual_lambda1 = 0.402448468201404;
inline constexpr double dual_lambda2 = 53.802045387209685;
inline constexpr double dual_T = 0.25548212825275349;
inline constexpr double dual_bound = 0.14163045836641772;

// Dual instance beta = 1.5, p = 3, q = 1.5, A = 1, B = 1.8
inline const ProblemParams dual2{1.5, 3.0, 1.5, 1.0, 1.8};
inline constexpr double dual2_lambda1 = 0.95121999149856284;
inline constexpr double dual2_lambda2 = 0.32840899979982968;
inline constexpr double dual2_T = 0.85553586536692858;
inline constexpr double dual2_bound = 0.41642391765492095;

// beta = 0.5, p = 2, q = 200
inline constexpr double r2_q200 = 0.48022733865772871;

// p-moment at beta = 0.5, p = 2, q = 4 with lambda1 = 1e-16, lambda2 = 231.5
inline constexpr double tiny_l1_moment = 0.99984486890924905;

}  // namespace ref

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

/// Distribution function of an evaluated weight, measured without the profile:
/// the weight is sampled along the vertical line through its centre and each
/// sample stands for the thin annulus {s_i < d / (1 - d) < s_(i+1)}, whose
/// nu-measure is 4 pi (s_(i+1) - s_i). Radii are log-uniform in s.
class AnnulusMeasure {
public:
    explicit AnnulusMeasure(const ExtremalWeight& w, int n = 500000, double s_lo = 1e-8,
                            double s_hi = 1e9)
        : s_lo_(s_lo), mags_(n), dens_(n) {
        const double lo = std::log(s_lo), hi = std::log(s_hi);
        for (int i = 0; i < n; ++i) {
            const double a = std::exp(lo + (hi - lo) * i / n);
            const double b = std::exp(lo + (hi - lo) * (i + 1) / n);
            const double s = std::sqrt(a * b);
            // y0 * y below the centre has d = ((1 - y) / (1 + y))^2 = s / (1 + s).
            const double r = std::sqrt(s / (1.0 + s));
            const double y = (1.0 - r) / (1.0 + r);
            mags_[i] = std::abs(eval_weight(w, {w.center.x, w.center.y * y}));
            dens_[i] = kFourPi * (b - a);
        }
    }

    /// nu({|F| > t}); the disc s < s_lo is counted whole.
    double operator()(double t) const {
        double measure = kFourPi * s_lo_;
        for (std::size_t i = 0; i < mags_.size(); ++i) {
            if (mags_[i] > t) measure += dens_[i];
        }
        return measure;
    }

private:
    double s_lo_;
    std::vector<double> mags_, dens_;
};

}  // namespace wavelock::testing
