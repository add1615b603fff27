// kbopt command-line front end: instance synthesis, regret-sweep simulation,
// complexity reports and exponent tables. Exit codes: 0 ok, 1 domain error,
// 2 usage error.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "kbopt/complexity.hpp"
#include "kbopt/exponents.hpp"
#include "kbopt/instance_io.hpp"
#include "kbopt/sweep.hpp"

namespace fs = std::filesystem;
using namespace kbopt;

namespace {

constexpr const char* kVersion = "kbopt 0.1.0";

std::string default_out_dir() {
    const char* env = std::getenv("KBOPT_OUTPUT_DIR");
    return env ? std::string(env) : std::string(".");
}

const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Plots the exponent-vs-dimension curves emitted by `kbopt exponents`.

Usage: python3 plot_exponents.py exponents.txt [out.png]
"""
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "exponents.txt"
out = sys.argv[2] if len(sys.argv) > 2 else "exponents.png"

curves = {}
for line in open(path):
    if line.startswith("#") or line.startswith("identity_check"):
        continue
    f = line.split()
    algo, d = f[0], int(f[1])
    upper = float(f[5])
    lower = float(f[7]) if f[7] != "na" else None
    curves.setdefault(algo, {"d": [], "upper": [], "lower": []})
    curves[algo]["d"].append(d)
    curves[algo]["upper"].append(upper)
    curves[algo]["lower"].append(lower)

colors = {"minimax": "tab:blue", "gp-ucb": "tab:orange",
          "pi-gp-ucb": "tab:green", "bead": "tab:red"}
for algo, c in curves.items():
    col = colors.get(algo, None)
    plt.plot(c["d"], c["upper"], "--", color=col, label=f"{algo} upper")
    if any(v is not None for v in c["lower"]):
        plt.plot(c["d"], c["lower"], "-", color=col, label=f"{algo} lower")
plt.xlabel("dimension d")
plt.ylabel("regret exponent")
plt.legend(fontsize=7)
plt.tight_layout()
plt.savefig(out, dpi=150)
print(f"wrote {out}")
)PY";

int run_synth(const std::string& kernel_name, double nu, double theta, int dim, double norm,
              int centers, std::uint64_t seed, double growth_b, double budget_factor,
              const std::string& out_file) {
    KernelSpec spec;
    spec.family = kernel_name == "se" ? KernelFamily::SquaredExponential : KernelFamily::Matern;
    spec.nu = nu;
    spec.theta = theta;
    spec.dim = dim;

    RkhsFunction f;
    if (growth_b > 0.0) {
        f = synth_growth_instance(spec, growth_b, seed);
        if (norm != 1.0) {
            f.weights *= norm;
            f.norm_expansion *= norm;
            f.fmax *= norm;
            f.M *= norm;
            f.holder_l_hat *= norm;
            f.growth.c_lower *= norm;
            f.growth.c_upper *= norm;
        }
    } else {
        f = synth_expansion(spec, centers, norm, seed, budget_factor);
    }

    fs::path path = out_file;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    save_instance(path.string(), f);

    std::cout << "instance " << path.string() << "\n"
              << "norm " << fmt_g17(f.declared_norm()) << "\n"
              << "m " << fmt_g17(f.M) << "\n"
              << "argmax " << fmt_point(f.argmax) << "\n"
              << "fmax " << fmt_g17(f.fmax) << "\n"
              << "holder_l_hat " << fmt_g17(f.holder_l_hat) << "\n";
    if (f.growth.valid)
        std::cout << "b_target " << fmt_g17(f.growth.b_target) << " b_hat "
                  << fmt_g17(f.growth.b_hat) << "\n";
    return 0;
}

int run_simulate(const std::string& instance_path, const std::vector<std::string>& strategies,
                 const std::vector<long long>& budgets, int replications, std::uint64_t seed,
                 double sigma, double tau, const std::string& beta_mode, int grid,
                 const std::string& out_dir, bool write_traces) {
    const RkhsFunction instance = load_instance(instance_path);

    ExperimentConfig config;
    for (const std::string& name : strategies) {
        StrategyConfig sc;
        sc.name = name;
        sc.tau = tau;
        sc.beta_mode = beta_mode == "decay" ? BetaMode::LogDecay : BetaMode::Concentration;
        sc.grid_per_axis = grid;
        config.strategies.push_back(sc);
    }
    config.budgets = budgets;
    config.replications = replications;
    config.base_seed = seed;
    config.sigma = sigma;
    config.write_traces = write_traces;
    config.output_dir = out_dir;

    const SweepResult result = run_sweep(config, instance);

    std::string config_line = "instance=" + instance_path + " strategies=";
    for (std::size_t i = 0; i < strategies.size(); ++i)
        config_line += (i ? "," : "") + strategies[i];
    config_line += " budgets=";
    for (std::size_t i = 0; i < budgets.size(); ++i)
        config_line += (i ? "," : "") + std::to_string(budgets[i]);
    config_line += " replications=" + std::to_string(replications) +
                   " seed=" + std::to_string(seed) + " sigma=" + fmt_g17(sigma) +
                   " tau=" + fmt_g17(tau) + " beta_mode=" + beta_mode +
                   " grid=" + std::to_string(grid) + " version=" + kVersion;

    fs::create_directories(out_dir);
    const std::string summary_path = (fs::path(out_dir) / "summary.txt").string();
    write_text_file(summary_path, serialize_summary(result, config_line));

    std::cout << "summary " << summary_path << "\n";
    for (const auto& [name, fit] : result.fits) {
        std::cout << "fit " << name;
        if (fit.valid)
            std::cout << " slope " << fmt_g17(fit.slope) << " stderr "
                      << fmt_g17(fit.stderr_slope);
        else
            std::cout << " slope na (needs >= 3 budgets with positive regret)";
        std::cout << "\n";
    }
    return 0;
}

int run_complexity(const std::string& instance_path, std::vector<double> deltas, double lambda,
                   double rho, double c1, double c2, double lipschitz_l, double sigma, double c,
                   int grid, const std::string& out_dir) {
    const RkhsFunction instance = load_instance(instance_path);
    if (deltas.empty()) deltas = {0.02, 0.05, 0.1};
    if (lambda <= 0.0) lambda = instance.lambda();
    if (rho <= 0.0) rho = geometry_constants(instance.kernel.dim).rho;
    if (c1 <= 0.0) c1 = default_upper_c1(instance);
    if (c2 <= 0.0) c2 = default_upper_c2(instance);
    if (lipschitz_l <= 0.0)
        lipschitz_l = instance.holder_l_hat > 0.0 ? 2.0 * instance.holder_l_hat / (1.0 - lambda)
                                                  : instance.M / (1.0 - lambda);

    fs::create_directories(out_dir);
    const std::string header = "# instance=" + instance_path + " lambda=" + fmt_g17(lambda) +
                               " sigma=" + fmt_g17(sigma) + " c=" + fmt_g17(c) +
                               " version=" + std::string(kVersion) + "\n";
    std::string lower_out = header, upper_out = header, lipschitz_out = header;
    for (double delta : deltas) {
        const ComplexityReport lo = lower_complexity(instance, delta, lambda, grid);
        const ComplexityReport up = upper_complexity(instance, delta, rho, c1, c2, grid);
        const ComplexityReport lip = lipschitz_complexity(instance, delta, lipschitz_l, lambda, grid);
        lower_out += serialize_complexity_report(lo);
        lower_out += "min_queries_per_ball " + fmt_g17(min_queries_diagnostic(delta, c, sigma)) + "\n";
        upper_out += serialize_complexity_report(up);
        lipschitz_out += serialize_complexity_report(lip);
    }
    write_text_file((fs::path(out_dir) / "complexity_lower.txt").string(), lower_out);
    write_text_file((fs::path(out_dir) / "complexity_upper.txt").string(), upper_out);
    write_text_file((fs::path(out_dir) / "complexity_lipschitz.txt").string(), lipschitz_out);
    std::cout << "wrote " << out_dir << "/complexity_{lower,upper,lipschitz}.txt\n";
    return 0;
}

int run_exponents(double nu, double b, int d_min, int d_max, const std::string& out_dir) {
    std::vector<ExponentTable> tables;
    for (int d = d_min; d <= d_max; ++d) tables.push_back(exponents(d, nu, b));
    const bool identity = exponent_identity_grid_check(200);

    std::string data = serialize_exponent_tables(tables);
    data += std::string("identity_check ") + (identity ? "1" : "0") + "\n";
    if (!(b > nu)) data += "# note: b <= nu, lower curves omitted\n";

    fs::create_directories(out_dir);
    write_text_file((fs::path(out_dir) / "exponents.txt").string(), data);
    write_text_file((fs::path(out_dir) / "plot_exponents.py").string(), kPlotScript);
    std::cout << "wrote " << out_dir << "/exponents.txt (identity_check="
              << (identity ? "1" : "0") << ")\n";
    return identity ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kernelized-bandit optimization toolkit"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config");
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "synthesize an RKHS instance");
    std::string kernel_name = "matern";
    double nu = 1.5, theta = 1.0, norm = 1.0, growth_b = 0.0, budget_factor = 2.0;
    int dim = 1, centers = 8;
    std::uint64_t seed = 1;
    std::string out_file;
    synth->add_option("--kernel", kernel_name)->check(CLI::IsMember({"matern", "se"}));
    synth->add_option("--nu", nu);
    synth->add_option("--theta", theta);
    synth->add_option("--d", dim);
    synth->add_option("--norm", norm);
    synth->add_option("--centers", centers);
    synth->add_option("--seed", seed);
    synth->add_option("--growth-b", growth_b, "target local growth exponent");
    synth->add_option("--budget-factor", budget_factor, "M = factor * norm");
    synth->add_option("--out-file", out_file);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run a regret sweep");
    std::string instance_path, beta_mode = "concentration", out_dir;
    std::vector<std::string> strategies;
    std::vector<long long> budgets;
    int replications = 1, grid = 16;
    double sigma = 0.1, tau = 1.0;
    bool no_traces = false;
    simulate->add_option("--instance", instance_path)->required();
    simulate->add_option("--strategy", strategies, "bead | gp-ucb | random")
        ->required()
        ->check(CLI::IsMember({"bead", "gp-ucb", "random"}));
    simulate->add_option("--budgets", budgets)->required()->delimiter(',');
    simulate->add_option("--replications", replications);
    simulate->add_option("--seed", seed);
    simulate->add_option("--sigma", sigma);
    simulate->add_option("--tau", tau);
    simulate->add_option("--beta-mode", beta_mode)
        ->check(CLI::IsMember({"concentration", "decay"}));
    simulate->add_option("--grid", grid, "gp-ucb grid points per axis");
    simulate->add_flag("--no-traces", no_traces);
    simulate->add_option("--out", out_dir);

    // complexity
    auto* complexity = app.add_subcommand("complexity", "instance complexity reports");
    std::vector<double> deltas;
    double lambda = 0.0, rho = 0.0, c1 = 0.0, c2 = 0.0, lipschitz_l = 0.0, annulus_c = 2.0,
           diag_sigma = 1.0;
    int cgrid = 0;
    complexity->add_option("--instance", instance_path)->required();
    complexity->add_option("--delta", deltas)->delimiter(',');
    complexity->add_option("--lambda", lambda);
    complexity->add_option("--rho", rho);
    complexity->add_option("--c1", c1);
    complexity->add_option("--c2", c2);
    complexity->add_option("--lipschitz-l", lipschitz_l);
    complexity->add_option("--sigma", diag_sigma, "noise scale for the min-queries annotation");
    complexity->add_option("--c", annulus_c, "annulus parameter for the min-queries annotation");
    complexity->add_option("--grid", cgrid);
    complexity->add_option("--out", out_dir);

    // exponents
    auto* expo = app.add_subcommand("exponents", "closed-form regret exponent curves");
    double e_nu = 1.1, e_b = 1.2;
    int d_min = 1, d_max = 10;
    expo->add_option("--nu", e_nu);
    expo->add_option("--b", e_b);
    expo->add_option("--d-min", d_min);
    expo->add_option("--d-max", d_max);
    expo->add_option("--out", out_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForVersion")
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    if (out_dir.empty()) out_dir = default_out_dir();
    if (out_file.empty()) out_file = (fs::path(out_dir) / "instance.txt").string();

    try {
        if (*synth)
            return run_synth(kernel_name, nu, theta, dim, norm, centers, seed, growth_b,
                             budget_factor, out_file);
        if (*simulate)
            return run_simulate(instance_path, strategies, budgets, replications, seed, sigma,
                                tau, beta_mode, grid, out_dir, !no_traces);
        if (*complexity)
            return run_complexity(instance_path, deltas, lambda, rho, c1, c2, lipschitz_l,
                                  diag_sigma, annulus_c, cgrid, out_dir);
        if (*expo) return run_exponents(e_nu, e_b, d_min, d_max, out_dir);
    } catch (const Error& e) {
        std::cerr << "kbopt: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "kbopt: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
