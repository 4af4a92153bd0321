#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "wavelock/closed_form.hpp"

using namespace wavelock;
namespace ref = wavelock::testing::ref;
using wavelock::testing::rel;

namespace {

// A random instance in the requested single regime, with the passive budget
// pushed past its threshold.
ProblemParams random_single(std::mt19937_64& rng, Side side) {
    std::uniform_real_distribution<double> beta(0.1, 5.0), e(1.05, 10.0), budget(0.1, 5.0),
        slack(1.05, 3.0);
    for (;;) {
        ProblemParams p{beta(rng), e(rng), e(rng), budget(rng), 1.0};
        if (std::abs(p.p - p.q) < 1e-3) continue;
        const auto c = derive_constants(p);
        if (side == Side::P && c.r2) {
            p.B = p.A * *c.r2 * slack(rng);
            return p;
        }
        if (side == Side::Q && c.r1) {
            p.B = p.A * *c.r1 / slack(rng);
            return p;
        }
    }
}

}  // namespace

TEST(SingleBound, ReferenceValues) {
    const ProblemParams p{0.5, 2, 4, 1, 1};
    const auto c = derive_constants(p);
    const auto r = single_bound(p, c, Side::P);
    EXPECT_NEAR(r.bound, 1.0 / std::sqrt(12.0 * M_PI), 1e-15);
    EXPECT_NEAR(rel(r.bound, ref::single_p_bound), 0.0, 1e-14);
    EXPECT_NEAR(rel(r.lambda, ref::single_p_lambda), 0.0, 1e-14);
    ASSERT_TRUE(r.cross_norm);
    EXPECT_NEAR(rel(*r.cross_norm, ref::r2), 0.0, 1e-13);

    const ProblemParams q{0.5, 2, 4, 10, 1};
    const auto rq = single_bound(q, derive_constants(q), Side::Q);
    EXPECT_NEAR(rel(rq.bound, ref::single_q_bound), 0.0, 1e-14);
}

TEST(SingleBound, RegimeMismatchThrows) {
    const ProblemParams p{0.5, 2, 4, 1, 0.4};
    EXPECT_THROW(single_bound(p, derive_constants(p), Side::P), RegimeMismatch);
    EXPECT_THROW(single_bound(p, derive_constants(p), Side::Q), RegimeMismatch);
    const ProblemParams s{0.5, 2, 4, 1, 1};
    EXPECT_THROW(single_bound(s, derive_constants(s), Side::Q), RegimeMismatch);
}

TEST(SingleBoundProperty, SwapSymmetry) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        const ProblemParams p = random_single(rng, Side::P);
        const auto a = single_bound(p, derive_constants(p), Side::P);
        const auto b = single_bound(p.swapped(), derive_constants(p.swapped()), Side::Q);
        EXPECT_NEAR(rel(a.bound, b.bound), 0.0, 1e-14);
        EXPECT_NEAR(rel(a.lambda, b.lambda), 0.0, 1e-14);
    }
}

TEST(SingleProfile, ShapeAndLimits) {
    const auto c = derive_constants({0.5, 2, 4, 1, 1});
    const auto prof = single_profile(c, 1.0, Side::P);
    EXPECT_DOUBLE_EQ(prof.at(0.0), 1.0);
    EXPECT_LT(prof.at(1.0 - 1e-9), 1e-15);
    EXPECT_EQ(prof.at(1.0), 0.0);
    double prev = prof.at(0.0);
    for (int i = 1; i < 1000; ++i) {
        const double v = prof.at(i / 1000.0);
        EXPECT_LE(v, prev);
        prev = v;
    }
    EXPECT_NEAR(prof.at(0.75), std::pow(0.25, 2.0), 1e-15);
    EXPECT_THROW(single_profile(c, 0.0, Side::P), InvalidParams);
}

TEST(Distribution, OfSingleProfile) {
    const auto c = derive_constants({0.5, 2, 4, 1, 1});
    const auto v = distribution_of_profile(single_profile(c, 1.0, Side::P));
    EXPECT_NEAR(v(0.25), kFourPi, 1e-12);
    EXPECT_EQ(v(1.0), 0.0);
    EXPECT_EQ(v(2.0), 0.0);
    for (double t : {1e-6, 0.01, 0.3, 0.9}) {
        EXPECT_NEAR(rel(v(t), kFourPi * (std::pow(t, -0.5) - 1.0)), 0.0, 1e-12);
    }
}

TEST(Distribution, BisectionAgreesWithBruteForceMeasure) {
    // Profile without a level map: exercises the bisection path. The brute
    // force sums 4 pi / (1 - d)^2 over a fine d-grid where the profile exceeds t.
    const RadialProfile prof([](double gap) { return std::pow(gap, 2.0); });
    const auto v = distribution_of_profile(prof);
    const int n = 400000;
    for (double t : {0.05, 0.25, 0.6}) {
        double brute = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = (i + 0.5) / n;
            if (prof.at(d) > t) brute += kFourPi / ((1.0 - d) * (1.0 - d)) / n;
        }
        EXPECT_NEAR(rel(v(t), kFourPi * (std::pow(t, -0.5) - 1.0)), 0.0, 1e-12);
        EXPECT_NEAR(rel(brute, v(t)), 0.0, 1e-4);
    }
}

TEST(Distribution, ZeroAndIndicatorProfiles) {
    const auto z = distribution_of_profile(RadialProfile::zero());
    EXPECT_EQ(z(0.1), 0.0);
    const auto ind = distribution_of_profile(RadialProfile::indicator(2.0, 0.3));
    EXPECT_NEAR(ind(1.0), kFourPi * 0.3 / 0.7, 1e-14);
    EXPECT_NEAR(ind(1.999), kFourPi * 0.3 / 0.7, 1e-14);
    EXPECT_EQ(ind(2.0), 0.0);
    EXPECT_NEAR(disc_measure(0.5), kFourPi, 1e-15);
}

TEST(MomentIdentities, ReferenceInstance) {
    const ProblemParams p{0.5, 2, 4, 1, 1};
    const auto c = derive_constants(p);
    const auto rep = verify_moment_identities(p, c, ref::single_p_lambda, Side::P);
    ASSERT_TRUE(rep.own.computed && rep.cross.computed);
    EXPECT_NEAR(*rep.own.computed, 1.0, 1e-10);
    EXPECT_LT(*rep.own.relative_residual(), 1e-10);
    EXPECT_NEAR(std::pow(*rep.cross.computed, 0.25), ref::r2, 1e-10);
    EXPECT_LT(*rep.cross.relative_residual(), 1e-10);
}

TEST(MomentIdentities, DivergentCrossMomentIsMarked) {
    const ProblemParams p{0.1, 4, 1.5, 1, 1};
    const auto c = derive_constants(p);
    EXPECT_FALSE(c.r2.has_value());
    const auto rep = verify_moment_identities(p, c, 1.0, Side::P);
    EXPECT_FALSE(rep.cross.computed.has_value());
    EXPECT_FALSE(rep.cross.relative_residual().has_value());
    EXPECT_LT(*rep.own.relative_residual(), 1e-10);
}

TEST(LayerCakeProperty, ClosedFormMatchesBoundFunctional) {
    std::mt19937_64 rng(32);
    for (int i = 0; i < 40; ++i) {
        const Side side = i % 2 ? Side::P : Side::Q;
        const ProblemParams p = random_single(rng, side);
        const auto c = derive_constants(p);
        const auto r = single_bound(p, c, side);
        const auto v = distribution_of_profile(single_profile(c, r.lambda, side));
        const double integral =
            layer_cake_bound(v, p.beta, clustering_exponent(p.beta, c.alpha(side)));
        EXPECT_NEAR(rel(integral, r.bound), 0.0, 1e-8)
            << "beta=" << p.beta << " p=" << p.p << " q=" << p.q;
    }
}

TEST(MomentIdentitiesProperty, ActiveMomentEqualsBudgetAndCrossAgreesWithClassifier) {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 30; ++i) {
        const Side side = i % 2 ? Side::P : Side::Q;
        const ProblemParams p = random_single(rng, side);
        const auto c = derive_constants(p);
        const auto r = single_bound(p, c, side);
        const auto rep = verify_moment_identities(p, c, r.lambda, side);
        const double e = p.exponent(side);
        EXPECT_NEAR(rel(*rep.own.computed, std::pow(p.budget(side), e)), 0.0, 1e-8);
        if (rep.cross.computed) {
            const double o = p.exponent(other(side));
            EXPECT_LE(std::pow(*rep.cross.computed, 1.0 / o), p.budget(other(side)));
        }
    }
}
