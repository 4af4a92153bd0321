// wavelock: bounds, extremal profiles, verification runs and parameter sweeps
// for Cauchy-wavelet localization operators under L^p and L^q constraints.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wavelock/wavelock.hpp"

namespace {

enum Exit : int {
    kOk = 0,
    kInvalid = 2,
    kSolver = 3,
    kIo = 4,
    kBreach = 5,
};

constexpr const char* kExitCodes =
    "Exit codes:\n"
    "  0  success\n"
    "  2  invalid parameters (p = q, nonpositive values, malformed flags)\n"
    "  3  solver or quadrature failure (diagnostics on stderr as JSON)\n"
    "  4  I/O error\n"
    "  5  verification tolerance breached (failed checks listed in the report)\n"
    "WAVELOCK_THREADS caps the number of worker threads.";

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_params(CLI::App* cmd, wavelock::ProblemParams& p, bool need_B = true) {
    cmd->add_option("--beta", p.beta, "Cauchy wavelet exponent (> 0)")->required();
    cmd->add_option("--p", p.p, "first Lebesgue exponent (> 1)")->required();
    cmd->add_option("--q", p.q, "second Lebesgue exponent (> 1, != p)")->required();
    cmd->add_option("--A", p.A, "L^p budget (> 0)")->required();
    auto* b = cmd->add_option("--B", p.B, "L^q budget (> 0)");
    if (need_B) b->required();
}

wavelock::HalfPlanePoint parse_center(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw wavelock::InvalidParams("--center expects x,y");
    wavelock::HalfPlanePoint z;
    try {
        z.x = std::stod(s.substr(0, comma));
        z.y = std::stod(s.substr(comma + 1));
    } catch (const std::exception&) {
        throw wavelock::InvalidParams("--center expects two numbers x,y");
    }
    z.validate();
    return z;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw wavelock::InvalidParams("could not parse list entry '" + item + "'");
        }
    }
    if (out.empty()) throw wavelock::InvalidParams("empty list");
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    return os;
}

void close_out(std::ofstream& os, const std::string& path) {
    os.close();
    if (!os) throw IoError("failed writing '" + path + "'");
}

int cmd_bound(const wavelock::ProblemParams& params, const std::string& format) {
    const auto rep = wavelock::compute_bound(params);
    if (format == "json") {
        std::cout << wavelock::to_json(rep).dump(2) << '\n';
    } else if (format == "csv") {
        wavelock::write_csv(std::cout, rep);
    } else {
        wavelock::write_text(std::cout, rep);
    }
    return kOk;
}

int cmd_profile(const wavelock::ProblemParams& params, std::size_t samples, const std::string& out,
                const std::string& center, double phase, const std::string& grid_out) {
    const auto rep = wavelock::compute_bound(params);
    const wavelock::HalfPlanePoint z0 = center.empty() ? wavelock::HalfPlanePoint{} : parse_center(center);
    const auto w = wavelock::ExtremalWeight::from_report(rep, z0, phase);
    auto os = open_out(out);
    wavelock::write_profile_csv(os, w, samples);
    close_out(os, out);
    if (!grid_out.empty()) {
        std::vector<double> xs, ys;
        for (int i = 0; i <= 100; ++i) {
            xs.push_back(z0.x + z0.y * (-5.0 + 0.1 * i));
            ys.push_back(z0.y * std::pow(10.0, -2.0 + 0.04 * i));
        }
        auto gs = open_out(grid_out);
        wavelock::write_weight_grid_csv(gs, w, xs, ys);
        close_out(gs, grid_out);
    }
    return kOk;
}

int cmd_verify(const wavelock::ProblemParams& params, const wavelock::VerifyOptions& opt,
               const std::string& format, const std::string& oracle_out) {
    const auto rep = wavelock::run_verification(params, opt);
    if (format == "json") {
        std::cout << wavelock::to_json(rep).dump(2) << '\n';
    } else {
        wavelock::write_text(std::cout, rep);
    }
    if (!oracle_out.empty()) {
        const auto prob = wavelock::DiscreteProblem::log_spaced(params, opt.oracle_points,
                                                                rep.oracle.t_max);
        const auto sol = wavelock::solve_discrete(prob);
        auto os = open_out(oracle_out);
        wavelock::write_oracle_csv(os, prob, sol, rep.bound.multipliers());
        close_out(os, oracle_out);
    }
    return rep.pass() ? kOk : kBreach;
}

struct ScanRow {
    std::vector<std::string> cells;
};

std::string error_cell(const std::string& msg) {
    std::string s = msg;
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '"') c = ';';
    }
    return s;
}

int cmd_scan(const wavelock::ProblemParams& base, double ratio_min, double ratio_max, int steps,
             const std::string& q_sweep, const std::string& out) {
    using wavelock::format_number;
    std::vector<wavelock::ProblemParams> instances;
    std::vector<std::string> header;
    const bool by_q = !q_sweep.empty();
    if (by_q) {
        for (double q : parse_list(q_sweep)) {
            auto p = base;
            p.q = q;
            instances.push_back(p);
        }
        header = {"index", "q",  "r1", "r2", "r2_limit", "r2_relative_to_limit", "regime", "bound",
                  "lambda1", "lambda2", "T", "error"};
    } else {
        if (steps < 1) throw wavelock::InvalidParams("--steps must be >= 1");
        if (!(ratio_min > 0.0) || !(ratio_max >= ratio_min)) {
            throw wavelock::InvalidParams("need 0 < --ratio-min <= --ratio-max");
        }
        for (int i = 0; i < steps; ++i) {
            const double ratio = steps == 1 ? ratio_min
                                            : ratio_min + (ratio_max - ratio_min) * i / (steps - 1);
            auto p = base;
            p.B = base.A * ratio;
            instances.push_back(p);
        }
        header = {"index", "ratio", "B", "regime", "bound", "lambda1", "lambda2", "T",
                  "r1", "r2", "error"};
    }
    for (const auto& p : instances) p.validate();

    std::vector<ScanRow> rows(instances.size());
    const long n = static_cast<long>(instances.size());
#pragma omp parallel for schedule(dynamic) num_threads(wavelock::worker_threads())
    for (long i = 0; i < n; ++i) {
        const auto& p = instances[static_cast<std::size_t>(i)];
        auto num = [](double v) { return format_number(v, 17); };
        auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : std::string{}; };
        std::vector<std::string>& c = rows[static_cast<std::size_t>(i)].cells;
        c.push_back(std::to_string(i));
        const auto consts = wavelock::derive_constants(p);
        if (by_q) {
            const double limit = std::pow(wavelock::kFourPi * consts.sigma_p, -1.0 / p.p);
            c.insert(c.end(), {num(p.q), opt(consts.r1), opt(consts.r2), num(limit),
                               consts.r2 ? num(*consts.r2 / limit - 1.0) : std::string{}});
        } else {
            c.insert(c.end(), {num(p.B / p.A), num(p.B)});
        }
        try {
            const auto rep = wavelock::compute_bound(p);
            c.insert(c.end(), {std::string(to_string(rep.regime.tag)), num(rep.bound),
                               num(rep.lambda1), num(rep.lambda2), opt(rep.T)});
            if (!by_q) c.insert(c.end(), {opt(rep.r1), opt(rep.r2)});
            c.push_back("");
        } catch (const std::exception& e) {
            c.insert(c.end(), {"", "", "", "", ""});
            if (!by_q) c.insert(c.end(), {opt(consts.r1), opt(consts.r2)});
            c.push_back(error_cell(e.what()));
        }
    }

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out.empty()) {
        file = open_out(out);
        os = &file;
    }
    *os << wavelock::csv_header(header) << '\n';
    for (const auto& r : rows) *os << wavelock::csv_row(r.cells) << '\n';
    if (!out.empty()) close_out(file, out);
    return kOk;
}

void print_failure(const char* kind, const std::string& what,
                   const std::vector<std::string>& diagnostics) {
    nlohmann::json j = {{"error", kind}, {"message", what}, {"diagnostics", diagnostics}};
    std::cerr << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sharp bounds for Cauchy-wavelet localization operators under L^p and L^q "
                 "weight constraints."};
    app.footer(kExitCodes);
    app.require_subcommand(1);

    wavelock::ProblemParams params;
    std::string format = "json";

    auto* bound = app.add_subcommand("bound", "compute the bound and report it");
    add_params(bound, params);
    bound->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));

    std::size_t samples = 1000;
    std::string out, center, grid_out;
    double phase = 0.0;
    auto* profile = app.add_subcommand("profile", "export the extremal profile as CSV");
    add_params(profile, params);
    profile->add_option("--samples", samples, "rows in the profile table")->check(CLI::PositiveNumber);
    profile->add_option("--out", out, "output CSV path")->required();
    profile->add_option("--center", center, "centre of the weight as x,y (default 0,1)");
    profile->add_option("--phase", phase, "constant phase in radians");
    profile->add_option("--grid-out", grid_out, "also write x,y,|F|,Re F,Im F samples here");

    wavelock::VerifyOptions vopt;
    std::string oracle_out;
    std::string verify_format = "json";
    auto* verify = app.add_subcommand("verify", "check the bound against the oracles");
    add_params(verify, params);
    verify->add_flag("--skip-operator", vopt.skip_operator, "run only the discrete oracle");
    verify->add_option("--oracle-points", vopt.oracle_points, "discrete oracle grid size")
        ->check(CLI::Range(100, 1000000));
    verify->add_option("--oracle-out", oracle_out, "write t,v,u_analytic of the oracle here");
    verify->add_option("--n-omega", vopt.grid.n_omega, "frequency nodes");
    verify->add_option("--omega-max", vopt.grid.omega_max, "frequency cutoff");
    verify->add_option("--x-half-width", vopt.grid.x_half_width, "x truncation");
    verify->add_option("--n-x", vopt.grid.n_x, "x nodes (odd)");
    verify->add_option("--y-min", vopt.grid.y_min, "smallest scale");
    verify->add_option("--y-max", vopt.grid.y_max, "largest scale");
    verify->add_option("--n-y", vopt.grid.n_y, "scale nodes");
    verify->add_option("--corrupt-weight", vopt.corrupt_scale,
                       "test hook: scale the reconstructed weight by this factor");
    verify->add_option("--format", verify_format, "output format")
        ->check(CLI::IsMember({"json", "text"}));

    double ratio_min = 0.2, ratio_max = 0.8;
    int steps = 41;
    std::string q_sweep, scan_out;
    wavelock::ProblemParams scan_params{0.0, 0.0, 0.0, 1.0, 1.0};
    auto* scan = app.add_subcommand("scan", "sweep B/A or q and write one CSV row per instance");
    scan->add_option("--beta", scan_params.beta, "Cauchy wavelet exponent")->required();
    scan->add_option("--p", scan_params.p, "first Lebesgue exponent")->required();
    scan->add_option("--q", scan_params.q, "second Lebesgue exponent (ignored with --q-sweep)");
    scan->add_option("--A", scan_params.A, "L^p budget (default 1)");
    scan->add_option("--B", scan_params.B, "L^q budget for --q-sweep (default 1)");
    scan->add_option("--ratio-min", ratio_min, "smallest B/A");
    scan->add_option("--ratio-max", ratio_max, "largest B/A");
    scan->add_option("--steps", steps, "number of ratios");
    scan->add_option("--q-sweep", q_sweep, "comma-separated q values");
    scan->add_option("--out", scan_out, "output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }

    try {
        if (bound->parsed()) return cmd_bound(params, format);
        if (profile->parsed()) return cmd_profile(params, samples, out, center, phase, grid_out);
        if (verify->parsed()) return cmd_verify(params, vopt, verify_format, oracle_out);
        if (scan->parsed()) {
            if (q_sweep.empty() && !scan->count("--q")) {
                throw wavelock::InvalidParams("scan needs --q unless --q-sweep is given");
            }
            if (!q_sweep.empty() && !scan->count("--q")) scan_params.q = scan_params.p + 1.0;
            return cmd_scan(scan_params, ratio_min, ratio_max, steps, q_sweep, scan_out);
        }
    } catch (const wavelock::InvalidParams& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kInvalid;
    } catch (const wavelock::SolverFailure& e) {
        print_failure("solver_failure", e.what(), e.diagnostics());
        return kSolver;
    } catch (const wavelock::QuadratureFailure& e) {
        print_failure("quadrature_failure", e.what(), {});
        return kSolver;
    } catch (const wavelock::Error& e) {
        print_failure("error", e.what(), {});
        return kSolver;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    }
    return kInvalid;
}
