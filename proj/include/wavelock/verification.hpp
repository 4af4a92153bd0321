#pragma once

// End-to-end verification of one instance: the discrete oracle against the
// analytic bound and distribution function, the reconstructed weight's norms,
// and the operator norm measured on a grid.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wavelock/oracle.hpp"
#include "wavelock/report.hpp"
#include "wavelock/solver.hpp"
#include "wavelock/verifier.hpp"
#include "wavelock/weight.hpp"

namespace wavelock {

struct Tolerances {
    double oracle_objective = 0.01;
    double oracle_pointwise = 0.02;
    /// Pointwise comparison window, as fractions of the support endpoint.
    double window_lo = 1e-3;
    double window_hi = 0.8;
    double weight_norm = 1e-6;
    double isometry = 1e-3;
    double operator_lo = 0.90;
    double operator_hi = 1.02;
};

struct VerifyOptions {
    std::size_t oracle_points = 2000;
    double t_max_factor = 2.0;
    bool skip_operator = false;
    GridSpec grid;
    HalfPlanePoint center;
    double operator_tol = 1e-8;
    int operator_max_iter = 500;
    /// Test hook: multiplies the reconstructed weight before it is checked.
    double corrupt_scale = 1.0;
    Tolerances tol;
};

struct OracleCheck {
    std::size_t points = 0;
    double t_max = 0.0;
    double objective = 0.0;
    double relative_gap = 0.0;      ///< (bound - objective) / bound
    double pointwise_error = 0.0;   ///< max relative |v - u| inside the window
    double residual_p = 0.0;
    double residual_q = 0.0;
    int iterations = 0;
    bool converged = false;
    bool pass = false;
};

struct WeightCheck {
    double p_norm = 0.0;
    double q_norm = 0.0;
    double p_error = 0.0;  ///< |p_norm / A - 1|
    double q_error = 0.0;
    bool pass = false;
};

struct OperatorCheck {
    GridSpec grid;
    std::vector<double> isometry_defects;
    double norm = 0.0;
    double ratio = 0.0;  ///< norm / bound
    int iterations = 0;
    bool converged = false;
    bool pass = false;
};

struct VerificationReport {
    BoundReport bound;
    OracleCheck oracle;
    WeightCheck weight;
    std::optional<OperatorCheck> op;
    std::vector<std::string> failures;

    bool pass() const { return failures.empty(); }
};

/// Test vectors used for the isometry check: w e^{-w}, w^2 e^{-w} and
/// w e^{-w} translated by x = -1.
inline std::vector<std::pair<std::string, HardyVector>> isometry_test_vectors(
    const WaveletFrame& frame) {
    return {
        {"w*exp(-w)", frame.sample([](double w) { return cplx(w * std::exp(-w)); })},
        {"w^2*exp(-w)", frame.sample([](double w) { return cplx(w * w * std::exp(-w)); })},
        {"w*exp(-w)*exp(iw)",
         frame.sample([](double w) { return w * std::exp(-w) * std::polar(1.0, w); })},
    };
}

/// The wavelet moved to z0: sqrt(y0) psi_hat(y0 w) e^{-i x0 w}. It is the top
/// eigenvector of L_F for radial F centred at z0.
inline HardyVector wavelet_at(const WaveletFrame& frame, const HalfPlanePoint& z0) {
    const double beta = frame.beta();
    return frame.sample([&](double w) {
        return std::sqrt(z0.y) * cauchy_wavelet_hat(z0.y * w, beta) * std::polar(1.0, -z0.x * w);
    });
}

inline OracleCheck check_oracle(const BoundReport& rep, const VerifyOptions& opt) {
    const Multipliers m = rep.multipliers();
    const double top = m.T;
    OracleCheck c;
    c.points = opt.oracle_points;
    c.t_max = opt.t_max_factor * top;
    const auto prob = DiscreteProblem::log_spaced(rep.params, opt.oracle_points, c.t_max);
    const DiscreteSolution sol = solve_discrete(prob);
    c.objective = sol.objective;
    c.relative_gap = (rep.bound - sol.objective) / rep.bound;
    c.residual_p = sol.residual_p;
    c.residual_q = sol.residual_q;
    c.iterations = sol.iterations;
    c.converged = sol.converged;
    for (std::size_t i = 0; i < prob.size(); ++i) {
        const double t = prob.t[i];
        if (t < opt.tol.window_lo * top || t > opt.tol.window_hi * top) continue;
        const double u = u_eval(t, m, rep.params);
        c.pointwise_error = std::max(c.pointwise_error, std::abs(sol.values[i] - u) / u);
    }
    c.pass = c.converged && std::abs(c.relative_gap) <= opt.tol.oracle_objective &&
             c.pointwise_error <= opt.tol.oracle_pointwise;
    return c;
}

inline WeightCheck check_weight(const BoundReport& rep, const ExtremalWeight& w,
                                const VerifyOptions& opt) {
    WeightCheck c;
    const WeightNorms n = weight_norms(w);
    c.p_norm = opt.corrupt_scale * n.p_norm;
    c.q_norm = opt.corrupt_scale * n.q_norm;
    c.p_error = std::abs(c.p_norm / rep.params.A - 1.0);
    c.q_error = std::abs(c.q_norm / rep.params.B - 1.0);
    const double tol = opt.tol.weight_norm;
    // An inactive constraint only has to hold; an active one must be saturated.
    auto ok = [&](double norm, double budget, double err, bool active) {
        return active ? err <= tol : norm <= budget * (1.0 + tol);
    };
    const bool p_active = rep.regime.tag != RegimeTag::SingleQ;
    const bool q_active = rep.regime.tag != RegimeTag::SingleP;
    c.pass = ok(c.p_norm, rep.params.A, c.p_error, p_active) &&
             ok(c.q_norm, rep.params.B, c.q_error, q_active);
    return c;
}

inline OperatorCheck check_operator(const BoundReport& rep, const ExtremalWeight& w,
                                    const VerifyOptions& opt) {
    OperatorCheck c;
    c.grid = opt.grid;
    const auto frame = WaveletFrame::from_spec(rep.params.beta, opt.grid);
    for (const auto& [name, f] : isometry_test_vectors(frame)) {
        c.isometry_defects.push_back(isometry_defect(f, frame));
    }
    PlaneField F = sample_weight(w, frame);
    for (auto& v : F) v *= opt.corrupt_scale;
    const NormResult r = operator_norm(F, frame, wavelet_at(frame, w.center), opt.operator_tol,
                                       opt.operator_max_iter);
    c.norm = r.value;
    c.ratio = r.value / rep.bound;
    c.iterations = r.iterations;
    c.converged = r.converged;
    const double worst = *std::max_element(c.isometry_defects.begin(), c.isometry_defects.end());
    c.pass = c.converged && worst <= opt.tol.isometry && c.ratio >= opt.tol.operator_lo &&
             c.ratio <= opt.tol.operator_hi;
    return c;
}

inline VerificationReport run_verification(const ProblemParams& params,
                                           const VerifyOptions& opt = {}) {
    VerificationReport rep;
    rep.bound = compute_bound(params);
    rep.oracle = check_oracle(rep.bound, opt);
    if (!rep.oracle.pass) rep.failures.push_back("oracle");
    const ExtremalWeight w = ExtremalWeight::from_report(rep.bound, opt.center);
    rep.weight = check_weight(rep.bound, w, opt);
    if (!rep.weight.pass) rep.failures.push_back("weight_norms");
    if (!opt.skip_operator) {
        rep.op = check_operator(rep.bound, w, opt);
        if (!rep.op->pass) rep.failures.push_back("operator");
    }
    return rep;
}

inline nlohmann::json to_json(const GridSpec& g) {
    return {{"n_omega", g.n_omega}, {"omega_max", g.omega_max}, {"x_half_width", g.x_half_width},
            {"n_x", g.n_x},         {"y_min", g.y_min},         {"y_max", g.y_max},
            {"n_y", g.n_y}};
}

inline nlohmann::json to_json(const VerificationReport& r) {
    nlohmann::json j;
    j["schema"] = kSchema;
    j["report"] = to_json(r.bound);
    j["oracle"] = {{"points", r.oracle.points},
                   {"t_max", r.oracle.t_max},
                   {"objective", r.oracle.objective},
                   {"relative_gap", r.oracle.relative_gap},
                   {"pointwise_error", r.oracle.pointwise_error},
                   {"residual_p", r.oracle.residual_p},
                   {"residual_q", r.oracle.residual_q},
                   {"iterations", r.oracle.iterations},
                   {"converged", r.oracle.converged},
                   {"pass", r.oracle.pass}};
    j["weight"] = {{"p_norm", r.weight.p_norm},
                   {"q_norm", r.weight.q_norm},
                   {"p_error", r.weight.p_error},
                   {"q_error", r.weight.q_error},
                   {"pass", r.weight.pass}};
    if (r.op) {
        j["operator"] = {{"grid", to_json(r.op->grid)},
                         {"isometry_defects", r.op->isometry_defects},
                         {"bound", r.bound.bound},
                         {"norm", r.op->norm},
                         {"ratio", r.op->ratio},
                         {"gap", 1.0 - r.op->ratio},
                         {"iterations", r.op->iterations},
                         {"converged", r.op->converged},
                         {"pass", r.op->pass}};
    } else {
        j["operator"] = nullptr;
    }
    j["failures"] = r.failures;
    j["pass"] = r.pass();
    return j;
}

inline void write_text(std::ostream& os, const VerificationReport& r) {
    auto num = [](double v) { return format_number(v, 9); };
    write_text(os, r.bound);
    os << "oracle: objective " << num(r.oracle.objective) << ", gap " << num(r.oracle.relative_gap)
       << ", pointwise " << num(r.oracle.pointwise_error) << ", iterations "
       << r.oracle.iterations << (r.oracle.pass ? " [pass]" : " [FAIL]") << '\n';
    os << "weight: p_norm " << num(r.weight.p_norm) << ", q_norm " << num(r.weight.q_norm)
       << (r.weight.pass ? " [pass]" : " [FAIL]") << '\n';
    if (r.op) {
        os << "operator: norm " << num(r.op->norm) << ", ratio " << num(r.op->ratio)
           << ", iterations " << r.op->iterations << ", isometry defects";
        for (double d : r.op->isometry_defects) os << ' ' << num(d);
        os << (r.op->pass ? " [pass]" : " [FAIL]") << '\n';
    } else {
        os << "operator: skipped\n";
    }
    for (const auto& f : r.failures) os << "failed: " << f << '\n';
}

}  // namespace wavelock
