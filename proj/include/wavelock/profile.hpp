#pragma once

// Radial weight profiles on the upper half-plane and their distribution
// functions with respect to the hyperbolic measure dx dy / y^2.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include "wavelock/core.hpp"

namespace wavelock {

/// nu-measure of the pseudo-hyperbolic disc {d < r}, written in terms of the
/// gap w = 1 - r.
inline double disc_measure_from_gap(double gap) noexcept {
    if (gap <= 0.0) return std::numeric_limits<double>::infinity();
    return kFourPi * (1.0 - gap) / gap;
}

inline double disc_measure(double r) noexcept { return disc_measure_from_gap(1.0 - r); }

/// Nonincreasing magnitude of a radial weight as a function of the squared
/// pseudo-hyperbolic coordinate d in [0, 1). It is stored as a function of the
/// gap w = 1 - d so that the region near the boundary keeps full precision.
class RadialProfile {
public:
    using Fn = std::function<double(double)>;

    RadialProfile() : by_gap_([](double) { return 0.0; }) {}

    /// `by_gap` must be nondecreasing on (0, 1]. `level_gap`, when given,
    /// maps a level t to the gap at which the magnitude crosses t (1 when the
    /// magnitude never exceeds t).
    explicit RadialProfile(Fn by_gap, Fn level_gap = {})
        : by_gap_(std::move(by_gap)), level_gap_(std::move(level_gap)) {}

    double at(double d) const { return at_gap(1.0 - d); }
    double at_gap(double gap) const { return gap <= 0.0 ? 0.0 : by_gap_(std::min(gap, 1.0)); }
    double peak() const { return at_gap(1.0); }

    bool has_level_gap() const noexcept { return static_cast<bool>(level_gap_); }
    double level_gap(double t) const { return level_gap_(t); }

    static RadialProfile zero() { return RadialProfile(); }

    /// Constant `height` on the disc {d < radius}, zero outside.
    static RadialProfile indicator(double height, double radius) {
        const double gap0 = 1.0 - radius;
        return RadialProfile([=](double gap) { return gap > gap0 ? height : 0.0; },
                             [=](double t) { return t < height ? gap0 : 1.0; });
    }

private:
    Fn by_gap_;
    Fn level_gap_;
};

/// v(t) = nu({|F| > t}), nonincreasing and right-continuous; zero for t >= peak.
class DistributionFunction {
public:
    DistributionFunction(std::function<double(double)> v, double peak)
        : v_(std::move(v)), peak_(peak) {}

    double operator()(double t) const { return t >= peak_ ? 0.0 : v_(t); }
    double peak() const noexcept { return peak_; }

private:
    std::function<double(double)> v_;
    double peak_;
};

/// Super-level sets of a radial nonincreasing profile are discs {d < r(t)},
/// so v(t) = 4 pi r / (1 - r). Without an analytic level map, r(t) is located
/// by bisection on log(gap).
inline DistributionFunction distribution_of_profile(const RadialProfile& profile) {
    const double peak = profile.peak();
    if (profile.has_level_gap()) {
        return DistributionFunction(
            [profile](double t) { return disc_measure_from_gap(profile.level_gap(t)); }, peak);
    }
    return DistributionFunction(
        [profile](double t) {
            // Find the smallest gap where the magnitude exceeds t.
            double lo = std::log(std::numeric_limits<double>::min());
            double hi = 0.0;
            if (profile.at_gap(std::exp(lo)) > t) return disc_measure_from_gap(std::exp(lo));
            for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
                const double mid = 0.5 * (lo + hi);
                if (profile.at_gap(std::exp(mid)) > t) hi = mid;
                else lo = mid;
            }
            return disc_measure_from_gap(std::exp(hi));
        },
        peak);
}

}  // namespace wavelock
