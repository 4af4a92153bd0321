#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "wavelock/weight.hpp"

using namespace wavelock;
namespace ref = wavelock::testing::ref;
using wavelock::testing::rel;

namespace {

ExtremalWeight dual_weight(HalfPlanePoint center = {}, double phase = 0.0) {
    return ExtremalWeight::from_report(compute_bound(ref::dual), center, phase);
}

}  // namespace

TEST(PseudoHyperbolic, ReferenceValues) {
    const HalfPlanePoint i{0, 1};
    EXPECT_EQ(pseudo_hyperbolic(i, i), 0.0);
    EXPECT_NEAR(pseudo_hyperbolic({0, 2}, i), 1.0 / 9.0, 1e-16);
    EXPECT_NEAR(pseudo_hyperbolic({1, 1}, i), 0.2, 1e-16);
    EXPECT_NEAR(pseudo_hyperbolic_gap({1, 1}, i), 0.8, 1e-16);
}

TEST(PseudoHyperbolicProperty, SymmetricAndBelowOne) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> x(-10, 10), ly(-8, 8);
    for (int k = 0; k < 500; ++k) {
        const HalfPlanePoint a{x(rng), std::exp(ly(rng))}, b{x(rng), std::exp(ly(rng))};
        const double d = pseudo_hyperbolic(a, b);
        EXPECT_NEAR(d, pseudo_hyperbolic(b, a), 1e-15);
        EXPECT_GE(d, 0.0);
        EXPECT_LT(d, 1.0);
        EXPECT_NEAR(d + pseudo_hyperbolic_gap(a, b), 1.0, 1e-14);
    }
}

TEST(PsiInverse, ReferenceValues) {
    const ProblemParams p{0.5, 2, 4, 1, 1};
    const Multipliers m = make_multipliers(1.0, 0.0, p);
    EXPECT_NEAR(psi_inverse(0.0, m, p), m.T, 1e-15);
    EXPECT_NEAR(psi_inverse(1.0, m, p), 0.25, 1e-15);
    EXPECT_LT(psi_inverse(1e12, m, p), 1e-20);
    EXPECT_EQ(psi_inverse(INFINITY, m, p), 0.0);
    EXPECT_THROW(psi_inverse(-1.0, m, p), std::domain_error);
}

TEST(PsiInverseProperty, RoundTripAndMonotone) {
    const auto rep = compute_bound(ref::dual);
    const Multipliers m = rep.multipliers();
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> frac(1e-6, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double t = m.T * frac(rng);
        EXPECT_NEAR(rel(psi_inverse(psi_forward(t, m, ref::dual), m, ref::dual), t), 0.0, 1e-12);
    }
    double prev = m.T;
    for (double s = 0.01; s < 1e6; s *= 1.7) {
        const double t = psi_inverse(s, m, ref::dual);
        EXPECT_LT(t, prev);
        EXPECT_LE(std::abs(psi_forward(t, m, ref::dual) - s), 1e-10 * (1.0 + s));
        prev = t;
    }
}

TEST(EvalWeight, PeakAtCentreAndDecayAtBoundary) {
    const auto w = dual_weight();
    EXPECT_NEAR(std::abs(eval_weight(w, {0, 1})), ref::dual_T, 1e-12);
    EXPECT_NEAR(w.peak(), ref::dual_T, 1e-12);
    EXPECT_LT(std::abs(eval_weight(w, {0, 1e-8})), 1e-6);
    EXPECT_EQ(std::abs(eval_weight(w, {0, 1e-300})), 0.0);
    EXPECT_THROW(eval_weight(w, {0, 0}), InvalidParams);
}

TEST(EvalWeight, SingleModeMatchesClosedForm) {
    const auto w = ExtremalWeight::from_report(compute_bound({0.5, 2, 4, 1, 1}));
    EXPECT_EQ(w.mode, RegimeTag::SingleP);
    for (double d : {0.0, 0.3, 0.9}) {
        const double y = (1.0 - std::sqrt(d)) / (1.0 + std::sqrt(d));  // d(iy, i) = d
        EXPECT_NEAR(rel(std::abs(eval_weight(w, {0, y})),
                        ref::single_p_lambda * std::pow(1.0 - d, 2.0)),
                    0.0, 1e-12);
    }
}

TEST(EvalWeightProperty, RadialAroundCentreAndPhaseInvariant) {
    const HalfPlanePoint c{0.7, 2.0};
    const auto w = dual_weight(c, M_PI / 3);
    const auto w0 = dual_weight(c, 0.0);
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> x(-5, 5), ly(-3, 3);
    for (int k = 0; k < 200; ++k) {
        const HalfPlanePoint z{x(rng), std::exp(ly(rng))};
        const auto v = eval_weight(w, z);
        const auto v0 = eval_weight(w0, z);
        EXPECT_NEAR(std::abs(v), std::abs(v0), 1e-15);
        if (std::abs(v0) > 0) {
            EXPECT_NEAR(std::arg(v), M_PI / 3, 1e-12);
        }
        // A point at the same pseudo-hyperbolic distance on the vertical line through c.
        const double d = pseudo_hyperbolic(z, c);
        const double r = std::sqrt(d);
        const HalfPlanePoint zv{c.x, c.y * (1.0 - r) / (1.0 + r)};
        EXPECT_NEAR(pseudo_hyperbolic(zv, c), d, 1e-12);
        EXPECT_NEAR(std::abs(eval_weight(w, zv)), std::abs(v), 1e-9 * ref::dual_T);
    }
}

TEST(WeightNorms, DualWeightSaturatesBothBudgets) {
    const auto n = weight_norms(dual_weight());
    EXPECT_NEAR(rel(n.p_norm, 1.0), 0.0, 1e-6);
    EXPECT_NEAR(rel(n.q_norm, 0.4), 0.0, 1e-6);
    const auto nc = weight_norms(dual_weight({3.0, 0.2}, 1.0));
    EXPECT_NEAR(rel(nc.p_norm, n.p_norm), 0.0, 1e-14);
}

TEST(WeightNorms, DualWeightJustAboveLowerThreshold) {
    // lambda1 is about 1e-30 here, so the p-decay only shows very close to the boundary.
    const ProblemParams p{0.5, 2, 4, 1, ref::r1 * (1.0 + 1e-7)};
    const auto n = weight_norms(ExtremalWeight::from_report(compute_bound(p)));
    EXPECT_NEAR(rel(n.p_norm, 1.0), 0.0, 1e-9);
    EXPECT_NEAR(rel(n.q_norm, p.B), 0.0, 1e-9);
}

TEST(WeightNorms, SinglePWeight) {
    const auto n = weight_norms(ExtremalWeight::from_report(compute_bound({0.5, 2, 4, 1, 1})));
    EXPECT_NEAR(rel(n.p_norm, 1.0), 0.0, 1e-9);
    EXPECT_NEAR(rel(n.q_norm, ref::r2), 0.0, 1e-9);
}

TEST(WeightNorms, ZeroProfile) {
    EXPECT_EQ(profile_norm(RadialProfile::zero(), 2.0, 0.5), 0.0);
}

TEST(WeightDistribution, MeasuredOnGridMatchesU) {
    const auto rep = compute_bound(ref::dual);
    const Multipliers m = rep.multipliers();
    for (const HalfPlanePoint c : {HalfPlanePoint{}, HalfPlanePoint{2.0, 0.3}}) {
        const wavelock::testing::AnnulusMeasure measured(ExtremalWeight::from_report(rep, c, 0.7));
        for (double frac : {0.05, 0.2, 0.5, 0.8, 0.95}) {
            const double t = frac * m.T;
            EXPECT_NEAR(rel(measured(t), u_eval(t, m, ref::dual)), 0.0, 1e-4) << "t/T=" << frac;
        }
    }
}

TEST(WeightProfile, DistributionEqualsU) {
    const auto rep = compute_bound(ref::dual);
    const auto w = ExtremalWeight::from_report(rep);
    const auto v = distribution_of_profile(w.profile());
    const Multipliers m = rep.multipliers();
    for (int i = 1; i < 100; ++i) {
        const double t = m.T * i / 100.0;
        EXPECT_NEAR(rel(v(t), u_eval(t, m, ref::dual)), 0.0, 1e-10);
    }
}
