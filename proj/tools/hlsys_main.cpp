#include <CLI11.hpp>

#include <iostream>

#include "hlsys/cli.hpp"
#include "hlsys/io.hpp"

using namespace hlsys;

int main(int argc, char** argv) {
    CLI::App app{"integral-system toolkit: Riesz potentials, sharp-constant ascent, "
                 "fixed-point solves and moving-plane diagnostics"};
    app.require_subcommand(1);

    std::string config_path;
    cli::RunOptions opt;
    app.add_option("--config", config_path, "experiment config (JSON)");
    app.add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", opt.seed, "seed for randomized starts")->capture_default_str();
    app.add_flag("--strict", opt.strict, "nonzero exit on non-convergence");
    app.add_option("--jobs", opt.jobs, "cap on worker threads (0 = hardware)");

    // field overrides (flags win over the config file)
    double n = -1, alpha = -1, p = -1, p0 = -1, r_max = -1, grading = -1;
    int intervals = -1;
    std::string start;
    app.add_option("--n", n, "dimension override");
    app.add_option("--alpha", alpha, "potential order override");
    app.add_option("--p", p, "system exponent override");
    app.add_option("--p0", p0, "dual exponent override (alternative to --p)");
    app.add_option("--rmax", r_max, "truncation radius override");
    app.add_option("-M,--intervals", intervals, "grid interval count override");
    app.add_option("--grading", grading, "grid grading override");
    app.add_option("--start", start, "start profile override (gaussian|bubble|indicator|random|file)");

    auto* c_bubble = app.add_subcommand("verify-bubble", "ratio test of the explicit conformal solution");
    auto* c_singular = app.add_subcommand("verify-singular", "power-law pair ratio constants and residual");
    auto* c_solve = app.add_subcommand("solve", "fixed-point solve of the integral system");
    auto* c_sharp = app.add_subcommand("sharp-constant", "alternating ascent of the bilinear functional");
    auto* c_sym = app.add_subcommand("symmetry", "moving-plane center recovery and monotonicity");
    auto* c_probe = app.add_subcommand("probe-contraction", "cutoff double-potential map diagnostics");
    auto* c_audit = app.add_subcommand("audit-exponents", "exponent identities and admissibility fuzz");

    CLI11_PARSE(app, argc, argv);

    cli::ExperimentConfig cfg;
    try {
        if (!config_path.empty()) cfg = cli::load_config(config_path);
        if (n > 0 || alpha > 0 || p > 0 || p0 > 0) {
            nlohmann::json e = cfg.exponents;
            if (n > 0) e["n"] = int(n);
            if (alpha > 0) e["alpha"] = alpha;
            if (p > 0) {
                e["p"] = p;
                e.erase("p0");
                e.erase("q");
            }
            if (p0 > 0) {
                e["p0"] = p0;
                e.erase("p");
                e.erase("q");
            }
            cfg.exponents = e;
        }
        if (r_max > 0) cfg.r_max = r_max;
        if (intervals > 0) cfg.intervals = intervals;
        if (grading > 0) cfg.grading = grading;
        if (!start.empty()) {
            cfg.solve_start = start;
            cfg.ascent_start = start;
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return cli::kExitConfigError;
    }

    if (c_bubble->parsed()) return cli::cmd_verify_bubble(cfg, opt);
    if (c_singular->parsed()) return cli::cmd_verify_singular(cfg, opt);
    if (c_solve->parsed()) return cli::cmd_solve(cfg, opt);
    if (c_sharp->parsed()) return cli::cmd_sharp_constant(cfg, opt);
    if (c_sym->parsed()) return cli::cmd_symmetry(cfg, opt);
    if (c_probe->parsed()) return cli::cmd_probe_contraction(cfg, opt);
    if (c_audit->parsed()) return cli::cmd_audit_exponents(cfg, opt);
    return cli::kExitConfigError;
}
