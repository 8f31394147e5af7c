// Command-line front end: simulate paths, estimate drift, check the kernel, run tables.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mixou/errors.hpp"
#include "mixou/estimators.hpp"
#include "mixou/gaussgen.hpp"
#include "mixou/kernel.hpp"
#include "mixou/mc.hpp"
#include "mixou/path_io.hpp"
#include "mixou/report.hpp"
#include "mixou/sde.hpp"
#include "mixou/stochint.hpp"

namespace {

using namespace mixou;
using nlohmann::json;

constexpr int kExitArgument = 2;
constexpr int kExitNumerical = 3;

// H = 0.5 on the command line selects the Brownian limit (alpha_H = 0).
HurstParam hurst_from_cli(double h) { return h == 0.5 ? HurstParam::half_limit() : HurstParam(h); }

void write_output(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(out, std::ios::binary);
    if (!os) throw ArgumentError("cannot open '" + out + "' for writing");
    os << text;
}

std::string read_file(const std::string& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw ArgumentError("cannot open '" + file + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct SimulateArgs {
    std::string process = "mou";
    double H = 0.75;
    double theta = 0.5;
    double T = 1.0;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    std::string method = "circulant";
    std::optional<double> a;
    std::optional<double> x0;
    std::string out;
};

int run_simulate(const SimulateArgs& args) {
    const GeneratorConfig config{parse_method(args.method)};
    const auto H = hurst_from_cli(args.H);
    SamplePath path;
    if (args.process == "mfbm") {
        path = sample_mixed(TimeGrid::over(args.T, args.n), H, config, args.seed).xi;
    } else if (args.process == "mou") {
        path = simulate_mou(ModelParams(H, args.theta, args.T, args.n, args.x0.value_or(0.0)), config, args.seed);
    } else if (args.process == "mcir") {
        const CirParams cp(args.a.value_or(1.0), args.x0.value_or(1.0));
        // theta only feeds the stability guard here; the CIR drift comes from --a.
        const auto cir = simulate_mcir(cp, ModelParams(H, -cp.atilde(), args.T, args.n, cp.y0()), config, args.seed);
        if (cir.tau) std::cerr << "absorbed at tau = " << format_double(*cir.tau) << '\n';
        path = cir.xtilde;
    } else {
        throw ArgumentError("unknown process '" + args.process + "' (mou, mcir, mfbm)");
    }
    write_output(path_to_csv(path), args.out);
    return 0;
}

struct EstimateArgs {
    std::string in;
    double H = 0.75;
    std::string method = "ergodic";
    std::optional<double> theta_true;
    bool check_identities = false;
    std::string out;
};

json identities(const SamplePath& x, double theta, const HurstParam& H) {
    // Recover the driving noise from the Euler recursion: dxi_i = X_{i+1} - X_i + theta delta X_i.
    SamplePath xi{x.grid, std::vector<double>(x.values.size(), 0.0), PathKind::MFBM, x.seed};
    for (std::size_t i = 0; i + 1 < x.values.size(); ++i)
        xi.values[i + 1] = xi.values[i] + (x.values[i + 1] - x.values[i]) + theta * x.grid.delta * x.values[i];

    const double T = x.horizon();
    const double sym = symmetric_integral(x, xi).value;
    const double fwd = forward_integral(x, xi).value;
    const double qv = quadratic_variation(x);
    const double sko = skorohod_xi_integral(x, xi, theta, H);
    const double ito_rhs = 0.5 * x.back() * x.back() + 0.5 * T + theta * trapezoid_squared(x);
    return {{"symmetric", sym},
            {"forward", fwd},
            {"qv", qv},
            {"skorohod", sko},
            {"residuals",
             {{"symmetric_vs_ito", std::abs(sym - ito_rhs) / (1.0 + std::abs(ito_rhs))},
              {"symmetric_minus_forward", (sym - fwd) - half_cross_variation(x, xi)},
              {"qv_minus_T", qv - T}}}};
}

int run_estimate(const EstimateArgs& args) {
    const auto H = hurst_from_cli(args.H);
    const bool cir = args.method == "cir";
    const auto x = read_path_csv(args.in, cir ? PathKind::MCIR : PathKind::MOU);

    EstimateResult result;
    if (args.method == "ergodic")
        result = ergodic_estimator(x, H);
    else if (args.method == "lse")
        result = args.theta_true ? lse_oracle(x, *args.theta_true, H) : lse_nonergodic(x);
    else if (cir)
        result = cir_drift_estimator(x);
    else
        throw ArgumentError("unknown estimation method '" + args.method + "' (ergodic, lse, cir)");

    json doc = to_json(result);
    if (args.check_identities) {
        if (!args.theta_true) throw ArgumentError("--check-identities needs --theta-true to recover the noise");
        doc["identities"] = identities(x, *args.theta_true, H);
    }
    write_output(doc.dump(2) + '\n', args.out);
    return 0;
}

struct KernelArgs {
    double H = 0.6;
    double T = 1.0;
    std::size_t m = 64;
    std::string dump_g;
    std::string out;
};

int run_kernel_check(const KernelArgs& args) {
    auto sol = solve_g(args.T, hurst_from_cli(args.H), args.m);
    const auto qv = qv_M(sol);
    compute_calG(sol);
    const double dev = check_property_G(sol);
    json doc{{"H", args.H},
             {"T", args.T},
             {"m", args.m},
             {"residual", sol.residual},
             {"qvM_T", sol.qvM(static_cast<Eigen::Index>(sol.m))},
             {"qvM_discrepancy", qv.max_discrepancy},
             {"property_G_deviation", dev}};
    write_output(doc.dump(2) + '\n', args.out);

    if (!args.dump_g.empty()) {
        // g(s_i, t_j) on the solved triangle, one row per (s, t) pair.
        std::string csv = "s,t,g\n";
        for (std::size_t j = 1; j <= sol.m; ++j)
            for (std::size_t i = 0; i < j; ++i)
                csv += format_double(sol.midpoint(i)) + ',' + format_double(sol.node(j)) + ',' +
                       format_double(sol.gmat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) + '\n';
        write_output(csv, args.dump_g);
    }
    return 0;
}

struct TableArgs {
    std::string config;
    std::string out;
    std::string format = "csv";
};

int run_table(const TableArgs& args) {
    const auto spec = parse_experiment_config(read_file(args.config));
    const auto format = parse_format(args.format);
    const auto results = run_experiment(spec);
    for (const auto& r : results)
        if (r.failed)
            std::cerr << "cell H=" << r.cell.H << " theta=" << r.cell.theta << " T=" << r.cell.T
                      << " delta=" << r.cell.delta << ": " << r.failures << " failed replications\n";
    write_output(emit_report(summarize(results), format), args.out);
    return 0;
}

struct PhiArgs {
    double H = 0.618;
    double theta = 0.1;
    double T = 100.0;
    std::string delta = "1/12";
    std::size_t reps = 2000;
    std::uint64_t seed = 0;
    std::string method = "circulant";
    std::size_t threads = 0;
    std::string out;
};

double parse_fraction(const std::string& text) {
    const auto slash = text.find('/');
    std::size_t used = 0;
    try {
        if (slash == std::string::npos) {
            const double v = std::stod(text, &used);
            if (used == text.size()) return v;
        } else {
            const double num = std::stod(text.substr(0, slash), &used);
            const bool ok = used == slash;
            const auto rest = text.substr(slash + 1);
            const double den = std::stod(rest, &used);
            if (ok && used == rest.size()) return num / den;
        }
    } catch (const std::logic_error&) {
    }
    throw ArgumentError("cannot parse number '" + text + "'");
}

int run_phi_cmd(const PhiArgs& args) {
    const auto H = HurstParam(args.H);
    const double delta = parse_fraction(args.delta);
    const auto run = run_phi(H, args.theta, args.T, delta, args.reps, args.seed, parse_method(args.method), args.threads);
    if (run.phi.size() < 4) throw NumericalError("fewer than 4 successful replications");
    const json params{{"H", args.H},         {"theta", args.theta}, {"T", args.T},     {"delta", delta},
                      {"reps", args.reps},   {"seed", args.seed},   {"method", args.method}};
    write_output(emit_report(run, params, ReportFormat::JSON), args.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixed fractional Ornstein-Uhlenbeck simulation and drift estimation"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "simulate a path and write it as t,value CSV");
    simulate->add_option("--process", sim.process, "mou | mcir | mfbm")->capture_default_str();
    simulate->add_option("--H", sim.H, "Hurst parameter in (1/2, 1)")->capture_default_str();
    simulate->add_option("--theta", sim.theta, "drift of the OU equation")->capture_default_str();
    simulate->add_option("--T", sim.T, "horizon")->capture_default_str();
    simulate->add_option("--n", sim.n, "number of steps")->capture_default_str();
    simulate->add_option("--seed", sim.seed)->capture_default_str();
    simulate->add_option("--method", sim.method, "cholesky | circulant")->capture_default_str();
    simulate->add_option("--a", sim.a, "CIR drift a > 0 (mcir, default 1)");
    simulate->add_option("--x0", sim.x0, "initial value (default 0; 1 for mcir)");
    simulate->add_option("--out", sim.out, "output file (default stdout)");

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "estimate the drift from a t,value CSV path");
    estimate->add_option("--in", est.in, "input path CSV")->required();
    estimate->add_option("--H", est.H)->capture_default_str();
    estimate->add_option("--method", est.method, "ergodic | lse | cir")->capture_default_str();
    estimate->add_option("--theta-true", est.theta_true, "true drift; turns lse into the oracle estimator");
    estimate->add_flag("--check-identities", est.check_identities, "add pathwise integral identities");
    estimate->add_option("--out", est.out);

    KernelArgs ker;
    auto* kernel = app.add_subcommand("kernel-check", "solve the kernel equation and report diagnostics");
    kernel->add_option("--H", ker.H, "Hurst parameter; 0.5 selects the Brownian limit")->capture_default_str();
    kernel->add_option("--T", ker.T)->capture_default_str();
    kernel->add_option("--m", ker.m, "grid size (>= 8)")->capture_default_str();
    kernel->add_option("--dump-g", ker.dump_g, "write g(s,t) on the solved grid as CSV");
    kernel->add_option("--out", ker.out);

    TableArgs tab;
    auto* table = app.add_subcommand("table", "run a Monte Carlo table from a key = value config");
    table->add_option("--config", tab.config)->required();
    table->add_option("--out", tab.out);
    table->add_option("--format", tab.format, "csv | json")->capture_default_str();

    PhiArgs phi;
    auto* phicmd = app.add_subcommand("phi", "distribution of the normalized ergodic-estimator error");
    phicmd->add_option("--H", phi.H)->capture_default_str();
    phicmd->add_option("--theta", phi.theta)->capture_default_str();
    phicmd->add_option("--T", phi.T)->capture_default_str();
    phicmd->add_option("--delta", phi.delta, "sampling interval, fractions like 1/12 allowed")->capture_default_str();
    phicmd->add_option("--reps", phi.reps)->capture_default_str();
    phicmd->add_option("--seed", phi.seed)->capture_default_str();
    phicmd->add_option("--method", phi.method)->capture_default_str();
    phicmd->add_option("--threads", phi.threads, "0 = MIXOU_THREADS or all cores")->capture_default_str();
    phicmd->add_option("--out", phi.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitArgument;
    }

    try {
        if (*simulate) return run_simulate(sim);
        if (*estimate) return run_estimate(est);
        if (*kernel) return run_kernel_check(ker);
        if (*table) return run_table(tab);
        if (*phicmd) return run_phi_cmd(phi);
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitArgument;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
