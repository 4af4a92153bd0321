#pragma once

// Serialization of BoundReport (JSON, CSV, text) and the CSV exports used by
// the command-line tool.

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavelock/core.hpp"
#include "wavelock/oracle.hpp"
#include "wavelock/solver.hpp"
#include "wavelock/weight.hpp"

namespace wavelock {

inline constexpr const char* kSchema = "wavelock/1";

inline std::string format_number(double v, int digits) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

namespace detail {

inline nlohmann::json optional_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline std::optional<double> optional_from(const nlohmann::json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<double>();
}

}  // namespace detail

inline nlohmann::json params_to_json(const ProblemParams& p) {
    return {{"beta", p.beta}, {"p", p.p}, {"q", p.q}, {"A", p.A}, {"B", p.B}};
}

inline ProblemParams params_from_json(const nlohmann::json& j) {
    return {j.at("beta").get<double>(), j.at("p").get<double>(), j.at("q").get<double>(),
            j.at("A").get<double>(), j.at("B").get<double>()};
}

/// Absent values are written as null, never as 0. Doubles use the shortest
/// representation that round-trips exactly.
inline nlohmann::json to_json(const BoundReport& r) {
    nlohmann::json j;
    j["schema"] = kSchema;
    j["params"] = params_to_json(r.params);
    j["regime"] = std::string(to_string(r.regime.tag));
    j["boundary"] = r.regime.boundary;
    j["bound"] = r.bound;
    j["r1"] = detail::optional_json(r.r1);
    j["r2"] = detail::optional_json(r.r2);
    j["lambda1"] = r.lambda1;
    j["lambda2"] = r.lambda2;
    j["T"] = detail::optional_json(r.T);
    j["residual_p"] = detail::optional_json(r.residual_p);
    j["residual_q"] = detail::optional_json(r.residual_q);
    j["cross_norm"] = detail::optional_json(r.cross_norm);
    j["wall_time_ms"] = r.wall_time_ms;
    j["diagnostics"] = r.diagnostics;
    return j;
}

inline BoundReport report_from_json(const nlohmann::json& j) {
    if (j.value("schema", std::string{}) != kSchema) {
        throw InvalidParams("unsupported report schema: " + j.value("schema", std::string{"<none>"}));
    }
    BoundReport r;
    r.params = params_from_json(j.at("params"));
    const auto tag = regime_from_string(j.at("regime").get<std::string>());
    if (!tag) throw InvalidParams("unknown regime tag in report");
    r.regime = {*tag, j.value("boundary", false)};
    r.bound = j.at("bound").get<double>();
    r.r1 = detail::optional_from(j, "r1");
    r.r2 = detail::optional_from(j, "r2");
    r.lambda1 = j.at("lambda1").get<double>();
    r.lambda2 = j.at("lambda2").get<double>();
    r.T = detail::optional_from(j, "T");
    r.residual_p = detail::optional_from(j, "residual_p");
    r.residual_q = detail::optional_from(j, "residual_q");
    r.cross_norm = detail::optional_from(j, "cross_norm");
    r.wall_time_ms = j.value("wall_time_ms", 0.0);
    r.diagnostics = j.value("diagnostics", std::vector<std::string>{});
    return r;
}

inline const std::vector<std::string>& report_csv_columns() {
    static const std::vector<std::string> cols = {
        "beta", "p", "q", "A", "B", "regime", "boundary", "bound", "r1", "r2", "lambda1",
        "lambda2", "T", "residual_p", "residual_q", "cross_norm", "wall_time_ms"};
    return cols;
}

inline std::string csv_header(const std::vector<std::string>& cols) {
    std::string s;
    for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? "," : "") + cols[i];
    return s;
}

/// CSV cells; absent values are empty cells.
inline std::vector<std::string> report_csv_cells(const BoundReport& r) {
    auto num = [](double v) { return format_number(v, 17); };
    auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : std::string{}; };
    return {num(r.params.beta), num(r.params.p), num(r.params.q), num(r.params.A),
            num(r.params.B), std::string(to_string(r.regime.tag)),
            r.regime.boundary ? "true" : "false", num(r.bound), opt(r.r1), opt(r.r2),
            num(r.lambda1), num(r.lambda2), opt(r.T), opt(r.residual_p), opt(r.residual_q),
            opt(r.cross_norm), num(r.wall_time_ms)};
}

inline std::string csv_row(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
    return s;
}

inline void write_csv(std::ostream& os, const BoundReport& r) {
    os << csv_header(report_csv_columns()) << '\n' << csv_row(report_csv_cells(r)) << '\n';
}

/// key: value lines, 9 significant digits.
inline void write_text(std::ostream& os, const BoundReport& r) {
    auto num = [](double v) { return format_number(v, 9); };
    auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : std::string("null"); };
    os << "beta: " << num(r.params.beta) << '\n'
       << "p: " << num(r.params.p) << '\n'
       << "q: " << num(r.params.q) << '\n'
       << "A: " << num(r.params.A) << '\n'
       << "B: " << num(r.params.B) << '\n'
       << "regime: " << to_string(r.regime.tag) << (r.regime.boundary ? " (boundary)" : "") << '\n'
       << "bound: " << num(r.bound) << '\n'
       << "r1: " << opt(r.r1) << '\n'
       << "r2: " << opt(r.r2) << '\n'
       << "lambda1: " << num(r.lambda1) << '\n'
       << "lambda2: " << num(r.lambda2) << '\n'
       << "T: " << opt(r.T) << '\n'
       << "residual_p: " << opt(r.residual_p) << '\n'
       << "residual_q: " << opt(r.residual_q) << '\n'
       << "cross_norm: " << opt(r.cross_norm) << '\n'
       << "wall_time_ms: " << num(r.wall_time_ms) << '\n';
    for (const auto& d : r.diagnostics) os << "diagnostic: " << d << '\n';
}

/// Side-by-side tables: column d with the weight magnitude, column t with
/// u(t). Row i has d = i / n and t = T (i + 1) / n, so the first row holds the
/// peak and the last row u(T) = 0.
inline void write_profile_csv(std::ostream& os, const ExtremalWeight& w, std::size_t n) {
    if (n < 1) throw InvalidParams("profile export needs at least one sample");
    const RadialProfile prof = w.profile();
    const DistributionFunction v = distribution_of_profile(prof);
    const double top = w.peak();
    os << "d,magnitude,t,u\n";
    for (std::size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(i) / static_cast<double>(n);
        const double t = top * static_cast<double>(i + 1) / static_cast<double>(n);
        os << format_number(d, 17) << ',' << format_number(prof.at(d), 17) << ','
           << format_number(t, 17) << ',' << format_number(v(t), 17) << '\n';
    }
}

/// Weight samples on a rectangular grid around the centre: x, y, |F|, Re F, Im F.
inline void write_weight_grid_csv(std::ostream& os, const ExtremalWeight& w,
                                  const std::vector<double>& xs, const std::vector<double>& ys) {
    os << "x,y,abs,re,im\n";
    for (double y : ys) {
        for (double x : xs) {
            const auto F = eval_weight(w, {x, y});
            os << format_number(x, 17) << ',' << format_number(y, 17) << ','
               << format_number(std::abs(F), 17) << ',' << format_number(F.real(), 17) << ','
               << format_number(F.imag(), 17) << '\n';
        }
    }
}

/// Oracle solution next to the analytic distribution function: t, v, u_analytic.
inline void write_oracle_csv(std::ostream& os, const DiscreteProblem& prob,
                             const DiscreteSolution& sol, const Multipliers& m) {
    os << "t,v,u_analytic\n";
    for (std::size_t i = 0; i < prob.size(); ++i) {
        os << format_number(prob.t[i], 17) << ',' << format_number(sol.values[i], 17) << ','
           << format_number(u_eval(prob.t[i], m, prob.params), 17) << '\n';
    }
}

}  // namespace wavelock
