#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wavelock/numerics.hpp"
#include "wavelock/quadrature.hpp"

using namespace wavelock;

TEST(Quadrature, SmoothIntegrands) {
    const auto r = integrate([](double t) { return std::exp(t); }, 0.0, 1.0);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, std::exp(1.0) - 1.0, 1e-14);
    const auto s = integrate([](double t) { return std::sin(t) * std::sin(t); }, 0.0, M_PI);
    EXPECT_NEAR(s.value, M_PI / 2.0, 1e-13);
}

TEST(Quadrature, ClusteredSubstitutionHandlesPowerSingularity) {
    // int_0^1 t^(-0.9) dt = 10.
    const double v = integrate_clustered_or_throw(
        [](double, double log_t) { return std::exp(-0.9 * log_t); }, 0.0, 1.0, 20.0, {}, "test");
    EXPECT_NEAR(v, 10.0, 1e-9);
}

TEST(Quadrature, NonConvergenceIsReported) {
    QuadratureConfig cfg;
    cfg.max_subdivisions = 10;
    const auto r = integrate([](double t) { return std::sin(1.0 / t); }, 1e-6, 1.0, cfg);
    EXPECT_FALSE(r.converged);
    EXPECT_THROW(integrate_clustered_or_throw(
                     [](double t, double) { return std::sin(1.0 / t); }, 1e-6, 1.0, 1.0, cfg,
                     "oscillatory"),
                 QuadratureFailure);
}

TEST(Quadrature, NonFiniteValuesThrow) {
    EXPECT_THROW(integrate([](double t) { return t > 0.5 ? NAN : 1.0; }, 0.0, 1.0),
                 QuadratureFailure);
}

TEST(Quadrature, ConfigValidation) {
    QuadratureConfig cfg;
    cfg.max_subdivisions = 5;
    EXPECT_THROW(cfg.validate(), InvalidParams);
    cfg = {};
    cfg.rel_tol = 0.0;
    EXPECT_THROW(cfg.validate(), InvalidParams);
}

TEST(Roots, BracketedRootFindsSqrtTwo) {
    const double r = numerics::bracketed_root([](double x) { return x * x - 2.0; }, 0.0, 2.0,
                                              1e-14, "sqrt2");
    EXPECT_NEAR(r, std::sqrt(2.0), 1e-14);
}

TEST(Roots, InvalidBracketThrowsWithDiagnostics) {
    try {
        numerics::bracketed_root([](double x) { return x * x + 1.0; }, 0.0, 2.0, 1e-14, "none");
        FAIL();
    } catch (const SolverFailure& e) {
        EXPECT_EQ(e.diagnostics().size(), 2u);
    }
}

TEST(Roots, RootBelowWalksDown) {
    auto f = [](double y) { return -30.0 - y; };  // decreasing, root at -30
    const double r = numerics::root_below(f, 0.0, f(0.0), -700.0, 1e-13, "walk");
    EXPECT_NEAR(r, -30.0, 1e-12);
    EXPECT_THROW(numerics::root_below(f, 0.0, f(0.0), -10.0, 1e-13, "floor"), SolverFailure);
}

TEST(PowerSum, SolveLogInvertsLogValue) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> logc(-20.0, 20.0), e(0.05, 9.0), target(-50.0, 50.0);
    for (int i = 0; i < 500; ++i) {
        numerics::PowerSum ps{std::exp(logc(rng)), e(rng), std::exp(logc(rng)), e(rng)};
        const double tgt = target(rng);
        const double y = ps.solve_log(tgt);
        EXPECT_NEAR(ps.log_value(y), tgt, 1e-11 * std::max(1.0, std::abs(tgt)));
    }
}

TEST(PowerSum, SingleTermIsExact) {
    numerics::PowerSum ps{4.0, 1.0, 0.0, 3.0};
    EXPECT_NEAR(std::exp(ps.solve_log(0.0)), 0.25, 1e-15);
}

TEST(LogAddExp, AbsorbsMinusInfinity) {
    const double ninf = -std::numeric_limits<double>::infinity();
    EXPECT_EQ(numerics::log_add_exp(ninf, 3.0), 3.0);
    EXPECT_NEAR(numerics::log_add_exp(1000.0, 1000.0), 1000.0 + std::log(2.0), 1e-12);
}
