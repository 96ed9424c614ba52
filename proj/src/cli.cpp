#include "hlsys/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "hlsys/closed_forms.hpp"
#include "hlsys/io.hpp"
#include "hlsys/parallel.hpp"
#include "hlsys/svg.hpp"

namespace hlsys::cli {

namespace {

namespace fs = std::filesystem;

std::shared_ptr<const RadialGrid> grid_of(const ExperimentConfig& cfg) {
    return make_grid(cfg.r_max, cfg.intervals, cfg.grading);
}

RieszKernelTable table_of(const ExperimentConfig& cfg, const ExponentConfig& exps,
                          std::shared_ptr<const RadialGrid> grid) {
    if (!cfg.kernel_cache.empty())
        return RieszKernelTable::load_or_build(cfg.kernel_cache, exps.n, exps.alpha, grid);
    return RieszKernelTable::build(exps.n, exps.alpha, grid);
}

nlohmann::json meta_block(const ExperimentConfig& cfg, const RunOptions& opt,
                          const std::string& command, const RadialGrid* grid) {
    nlohmann::json m;
    m["version"] = kVersion;
    m["command"] = command;
    m["config_hash"] = hex64(fnv1a(cfg.resolved().dump()));
    if (grid) m["grid_hash"] = hex64(grid->hash());
    m["seed"] = opt.seed;
    m["jobs"] = opt.jobs == 0 ? max_threads() : opt.jobs;
    return m;
}

void write_report(const std::string& out_dir, const nlohmann::json& report) {
    std::ofstream out(out_dir + "/report.json");
    if (!out) throw std::runtime_error("cannot write " + out_dir + "/report.json");
    out << report.dump(2) << "\n";
}

void prepare(const RunOptions& opt) {
    fs::create_directories(opt.out_dir);
    set_max_threads(opt.jobs);
}

RadialFunction start_profile(const ExperimentConfig& cfg, const ExponentConfig& exps,
                             std::shared_ptr<const RadialGrid> grid,
                             const std::string& kind, std::uint64_t seed) {
    if (kind == "gaussian") {
        RadialFunction u = make_function(grid, [](double r) { return std::exp(-r * r); });
        fit_tail(u);
        return u;
    }
    if (kind == "bubble")
        return bubble_profile(exps, {cfg.bubble_lambda, 1.0}, grid);
    if (kind == "maximizer")
        return maximizer_profile(exps, grid, cfg.bubble_lambda);
    if (kind == "indicator") {
        RadialFunction u = make_function(grid, [](double r) {
            return r < 1.0 ? 1.0 : (r == 1.0 ? 0.5 : 0.0);
        });
        return u;
    }
    if (kind == "random") {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        RadialFunction u = zero_function(grid);
        for (auto& v : u.values) v = 0.05 + std::fabs(gauss(rng));
        return u;
    }
    if (kind == "file") {
        RadialFunction u = read_profile_csv(cfg.solve_start_file);
        if (u.grid->hash() != grid->hash()) u = resample_to(u, grid);
        return u;
    }
    throw std::invalid_argument("unknown start profile kind: " + kind);
}

int config_error(const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
}

int run_error(const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerificationFailed;
}

} // namespace

ExponentConfig ExperimentConfig::config_from_exponents(const nlohmann::json& j) {
    return config_from_json(j);
}

nlohmann::json ExperimentConfig::resolved() const {
    nlohmann::json j;
    j["exponents"] = exponents;
    j["grid"] = {{"r_max", r_max}, {"intervals", intervals}, {"grading", grading}};
    j["solver"] = {{"max_iters", solver.max_iters},
                   {"tol", solver.tol},
                   {"damping", solver.damping},
                   {"normalization",
                    solver.normalization == Normalization::ValueAtZero ? "value-at-zero" : "lp-norm"},
                   {"start", solve_start},
                   {"start_file", solve_start_file}};
    j["ascent"] = {{"tol", ascent.tol},
                   {"max_half_steps", ascent.max_half_steps},
                   {"start", ascent_start}};
    j["symmetry"] = {{"dim", sym_dim},
                     {"lo", sym_lo},
                     {"hi", sym_hi},
                     {"spacing", sym_spacing},
                     {"center", {sym_center[0], sym_center[1], sym_center[2]}},
                     {"source", sym_source},
                     {"source_file", sym_source_file},
                     {"center_tol", sym_center_tol}};
    j["probe"] = {{"R", probe_R}, {"amplitudes", probe_amplitudes}};
    j["verify"] = {{"threshold", verify_threshold}, {"bubble_lambda", bubble_lambda}};
    j["audit_fuzz"] = audit_fuzz;
    j["kernel_cache"] = kernel_cache;
    return j;
}

ExperimentConfig config_from_json_doc(const nlohmann::json& doc) {
    ExperimentConfig cfg;
    if (doc.contains("exponents")) cfg.exponents = doc.at("exponents");
    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        cfg.r_max = g.value("r_max", cfg.r_max);
        cfg.intervals = g.value("intervals", cfg.intervals);
        cfg.grading = g.value("grading", cfg.grading);
    }
    if (doc.contains("solver")) {
        const auto& s = doc.at("solver");
        cfg.solver.max_iters = s.value("max_iters", cfg.solver.max_iters);
        cfg.solver.tol = s.value("tol", cfg.solver.tol);
        cfg.solver.damping = s.value("damping", cfg.solver.damping);
        const std::string norm = s.value("normalization", std::string("value-at-zero"));
        if (norm == "value-at-zero")
            cfg.solver.normalization = Normalization::ValueAtZero;
        else if (norm == "lp-norm")
            cfg.solver.normalization = Normalization::LpNorm;
        else
            throw std::invalid_argument("solver.normalization must be value-at-zero or lp-norm");
        cfg.solve_start = s.value("start", cfg.solve_start);
        cfg.solve_start_file = s.value("start_file", cfg.solve_start_file);
    }
    if (doc.contains("ascent")) {
        const auto& a = doc.at("ascent");
        cfg.ascent.tol = a.value("tol", cfg.ascent.tol);
        cfg.ascent.max_half_steps = a.value("max_half_steps", cfg.ascent.max_half_steps);
        cfg.ascent_start = a.value("start", cfg.ascent_start);
    }
    if (doc.contains("symmetry")) {
        const auto& s = doc.at("symmetry");
        cfg.sym_dim = s.value("dim", cfg.sym_dim);
        cfg.sym_lo = s.value("lo", cfg.sym_lo);
        cfg.sym_hi = s.value("hi", cfg.sym_hi);
        cfg.sym_spacing = s.value("spacing", cfg.sym_spacing);
        if (s.contains("center")) {
            const auto& c = s.at("center");
            for (std::size_t a2 = 0; a2 < c.size() && a2 < 3; ++a2)
                cfg.sym_center[a2] = c[a2].get<double>();
        }
        cfg.sym_source = s.value("source", cfg.sym_source);
        cfg.sym_source_file = s.value("source_file", cfg.sym_source_file);
        cfg.sym_center_tol = s.value("center_tol", cfg.sym_center_tol);
        if (s.contains("dump_lambda")) cfg.sym_dump_lambda = s.at("dump_lambda").get<double>();
    }
    if (doc.contains("probe")) {
        const auto& p = doc.at("probe");
        cfg.probe_R = p.value("R", cfg.probe_R);
        if (p.contains("amplitudes"))
            cfg.probe_amplitudes = p.at("amplitudes").get<std::vector<double>>();
    }
    if (doc.contains("verify")) {
        const auto& v = doc.at("verify");
        cfg.verify_threshold = v.value("threshold", cfg.verify_threshold);
        cfg.bubble_lambda = v.value("bubble_lambda", cfg.bubble_lambda);
    }
    cfg.audit_fuzz = doc.value("audit_fuzz", cfg.audit_fuzz);
    cfg.kernel_cache = doc.value("kernel_cache", cfg.kernel_cache);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    nlohmann::json doc;
    in >> doc;
    return config_from_json_doc(doc);
}

int cmd_verify_bubble(const ExperimentConfig& cfg, const RunOptions& opt) {
    ExponentConfig exps;
    try {
        exps = cfg.config();
        if (!is_conformal(exps))
            throw std::invalid_argument("verify-bubble requires the conformal case p = q = (n+alpha)/(n-alpha)");
        prepare(opt);
    } catch (const std::exception& e) {
        return config_error(e);
    }
    try {
        auto grid = grid_of(cfg);
        auto table = table_of(cfg, exps, grid);
        const BubbleReport rep = verify_bubble(exps, table, {cfg.bubble_lambda, 1.0});

        write_csv(opt.out_dir + "/rho.csv", {"r", "rho"}, {rep.radii, rep.ratio});
        write_line_svg(opt.out_dir + "/rho.svg", "potential-to-profile ratio", "r", "rho(r)",
                       {{"rho", rep.radii, rep.ratio}});

        nlohmann::json report;
        report["meta"] = meta_block(cfg, opt, "verify-bubble", grid.get());
        report["config"] = to_json(exps);
        report["result"] = to_json(rep);
        report["threshold"] = cfg.verify_threshold;
        const bool pass = rep.ratio_spread <= cfg.verify_threshold;
        report["pass"] = pass;
        report["warnings"] = nlohmann::json::array(
            {"ratio window extends to r_max/2; beyond r_max/4 the tail-model "
             "extrapolation error grows with r"});
        write_report(opt.out_dir, report);
        std::cout << "ratio mean " << rep.ratio_mean << ", spread " << rep.ratio_spread
                  << (pass ? " (pass)" : " (fail)") << "\n";
        return pass ? kExitOk : kExitVerificationFailed;
    } catch (const std::exception& e) {
        return run_error(e);
    }
}

int cmd_verify_singular(const ExperimentConfig& cfg, const RunOptions& opt) {
    ExponentConfig exps;
    try {
        exps = cfg.config();
        prepare(opt);
    } catch (const std::exception& e) {
        return config_error(e);
    }
    try {
        auto grid = grid_of(cfg);
        auto table = table_of(cfg, exps, grid);
        const SingularReport rep = singular_pair(exps, table);

        write_csv(opt.out_dir + "/ratios.csv", {"r", "ratio_u", "ratio_v"},
                  {rep.radii, rep.ratio_u, rep.ratio_v});
        write_line_svg(opt.out_dir + "/ratios.svg", "power-law ratio constants", "r", "ratio",
                       {{"u-side", rep.radii, rep.ratio_u}, {"v-side", rep.radii, rep.ratio_v}});

        nlohmann::json report;
        report["meta"] = meta_block(cfg, opt, "verify-singular", grid.get());
        report["config"] = to_json(exps);
        report["result"] = to_json(rep);
        const bool pass = rep.flat_u <= 1e-2 && rep.flat_v <= 1e-2 && rep.residual <= 1e-2;
        report["pass"] = pass;
        write_report(opt.out_dir, report);
        std::cout << "c_u " << rep.pair.c_u << ", c_v " << rep.pair.c_v << ", residual "
                  << rep.residual << (pass ? " (pass)" : " (fail)") << "\n";
        return pass ? kExitOk : kExitVerificationFailed;
    } catch (const std::exception& e) {
        return run_error(e);
    }
}

int cmd_solve(const ExperimentConfig& cfg, const RunOptions& opt) {
    ExponentConfig exps;
    try {
        exps = cfg.config();
        prepare(opt);
        if (cfg.solve_start == "bubble" && !is_conformal(exps))
            throw std::invalid_argument("bubble start requires a conformal config");
    } catch (const std::exception& e) {
        return config_error(e);
    }
    try {
        auto grid = grid_of(cfg);
        auto table = table_of(cfg, exps, grid);
        RadialFunction u0 = start_profile(cfg, exps, grid, cfg.solve_start, opt.seed);
        PicardResult res = picard_solve(exps, table, u0, cfg.solver);

        write_profile_csv(opt.out_dir + "/u.csv", res.u, exps.n);
        write_profile_csv(opt.out_dir + "/v.csv", res.v, exps.n);
        std::vector<double> iters(res.report.change_history.size());
        for (std::size_t i = 0; i < iters.size(); ++i) iters[i] = double(i);
        write_csv(opt.out_dir + "/history.csv", {"iter", "change", "gamma_u", "gamma_v"},
                  {iters, res.report.change_history, res.report.gamma_u_history,
                   res.report.gamma_v_history});
        write_line_svg(opt.out_dir + "/history.svg", "iteration history", "iteration",
                       "relative change", {{"change", iters, res.report.change_history}}, true);
        std::vector<double> radii(grid->nodes);
        write_line_svg(opt.out_dir + "/profiles.svg", "solution pair", "r", "value",
                       {{"u", radii, res.u.values}, {"v", radii, res.v.values}});

        nlohmann::json report;
        report["meta"] = meta_block(cfg, opt, "solve", grid.get());
        report["config"] = to_json(exps);
        report["result"] = to_json(res.report);
        write_report(opt.out_dir, report);
        std::cout << (res.report.converged ? "converged" : "did not converge") << " in "
                  << res.report.iterations << " iterations, residual "
                  << res.report.residual.max_rel() << "\n";
        if (opt.strict && !res.report.converged) return kExitVerificationFailed;
        return kExitOk;
    } catch (const std::exception& e) {
        return run_error(e);
    }
}

int cmd_sharp_constant(const ExperimentConfig& cfg, const RunOptions& opt) {
    ExponentConfig exps;
    try {
        exps = cfg.config();
        prepare(opt);
    } catch (const std::exception& e) {
        return config_error(e);
    }
    try {
        auto grid = grid_of(cfg);
        auto table = table_of(cfg, exps, grid);
        RadialFunction f0 = start_profile(cfg, exps, grid, cfg.ascent_start, opt.seed);
        const AscentReport rep = alternating_ascent(exps, table, f0, cfg.ascent);

        std::vector<double> steps(rep.j_history.size());
        for (std::size_t i = 0; i < steps.size(); ++i) steps[i] = double(i + 1);
        write_csv(opt.out_dir + "/j_history.csv", {"half_step", "J"}, {steps, rep.j_history});
        write_line_svg(opt.out_dir + "/j_history.svg", "functional ascent", "half-step", "J",
                       {{"J", steps, rep.j_history}});
        write_profile_csv(opt.out_dir + "/f.csv", rep.f, exps.n);
        write_profile_csv(opt.out_dir + "/g.csv", rep.g, exps.n);

        nlohmann::json report;
        report["meta"] = meta_block(cfg, opt, "sharp-constant", grid.get());
        report["config"] = to_json(exps);
        report["result"] = to_json(rep);
        write_report(opt.out_dir, report);
        std::cout << "J = " << rep.final_j << " after " << rep.half_steps << " half-steps"
                  << (rep.converged ? "" : " (not converged)") << "\n";
        if (opt.strict && !rep.converged) return kExitVerificationFailed;
        return kExitOk;
    } catch (const std::exception& e) {
        return run_error(e);
    }
}

int cmd_symmetry(const ExperimentConfig& cfg, const RunOptions& opt) {
    ExponentConfig exps;
    std::function<double(double)> source;
    try {
        exps = cfg.config();
        prepare(opt);
        if (cfg.sym_source == "maximizer") {
            const double e = exps.n / exps.p0;
            const double lam = cfg.bubble_lambda, lam2 = lam * lam;
            source = [e, lam, lam2](double r) { return std::pow(lam / (lam2 + r * r), e); };
        } else if (cfg.sym_source == "bubble") {
            if (!is_conformal(exps))
                throw std::invalid_argument("bubble source requires a conformal config");
            const double e = 0.5 * (exps.n - exps.alpha);
            const double lam = cfg.bubble_lambda, lam2 = lam * lam;
            source = [e, lam, lam2](double r) { return std::pow(lam / (lam2 + r * r), e); };
        } else if (cfg.sym_source == "file") {
            auto prof = std::make_shared<RadialFunction>(read_profile_csv(cfg.sym_source_file));
            source = [prof](double r) { return (*prof)(r); };
        } else {
            throw std::invalid_argument("unknown symmetry source: " + cfg.sym_source);
        }
    } catch (const std::exception& e) {
        return config_error(e);
    }
    try {
        const CartesianField field = sample_field(cfg.sym_dim, source, cfg.sym_center,
                                                  cfg.sym_lo, cfg.sym_hi, cfg.sym_spacing);
        const SymmetryReport rep = center_and_monotonicity_report(field, 1e-9);

        bool center_ok = true;
        for (int a = 0; a < cfg.sym_dim; ++a)
            if (std::fabs(rep.center[a] - cfg.sym_center[a]) > cfg.sym_center_tol)
                center_ok = false;

        if (!std::isnan(cfg.sym_dump_lambda)) {
            const BadSet bs = bad_set(field, 0, cfg.sym_dump_lambda, 1e-9);
            const CartesianField refl = reflect(field, 0, cfg.sym_dump_lambda);
            std::vector<std::vector<double>> cols(cfg.sym_dim + 2);
            for (std::size_t idx : bs.cells) {
                std::size_t rest = idx;
                int coords[3] = {0, 0, 0};
                for (int a = cfg.sym_dim - 1; a >= 0; --a) {
                    coords[a] = int(rest % field.counts[a]);
                    rest /= field.counts[a];
                }
                for (int a = 0; a < cfg.sym_dim; ++a)
                    cols[a].push_back(field.coord(a, coords[a]));
                cols[cfg.sym_dim].push_back(field.values[idx]);
                cols[cfg.sym_dim + 1].push_back(refl.values[idx]);
            }
            std::vector<std::string> header;
            for (int a = 0; a < cfg.sym_dim; ++a) header.push_back("x" + std::to_string(a + 1));
            header.push_back("u");
            header.push_back("u_lambda");
            write_csv(opt.out_dir + "/badset.csv", header, cols);
        }

        nlohmann::json report;
        report["meta"] = meta_block(cfg, opt, "symmetry", nullptr);
        report["config"] = to_json(exps);
        report["result"] = to_json(rep, cfg.sym_dim);
        report["declared_center"] = {cfg.sym_center[0], cfg.sym_center[1], cfg.sym_center[2]};
        report["center_within_tol"] = center_ok;
        const bool pass = center_ok && rep.radial_decrease;
        report["pass"] = pass;
        write_report(opt.out_dir, report);
        std::cout << "center (" << rep.center[0] << ", " << rep.center[1] << ")"
                  << ", radial decrease " << (rep.radial_decrease ? "true" : "false")
                  << (pass ? " (pass)" : " (fail)") << "\n";
        return pass ? kExitOk : kExitVerificationFailed;
    } catch (const std::exception& e) {
        return run_error(e);
    }
}

int cmd_probe_contraction(const ExperimentConfig& cfg, const RunOptions& opt) {
    ExponentConfig exps;
    ProbeParams params;
    try {
        exps = cfg.config();
        params = probe_params_from(exps, cfg.probe_R);
        prepare(opt);
    } catch (const std::exception& e) {
        return config_error(e);
    }
    try {
        auto grid = make_grid(cfg.probe_R, cfg.intervals, cfg.grading);
        ContractionProbe probe(params, grid);

        const double pw = std::max(exps.p, exps.q);
        const double qw = std::min(exps.p, exps.q);
        RadialFunction base = make_function(grid, [](double r) { return 1.0 / (1.0 + r * r); });
        RadialFunction U = pow_profile(base, pw - params.r);
        RadialFunction V = pow_profile(base, qw - 1.0 / params.r);
        RadialFunction phi = make_function(grid, [](double r) { return std::exp(-3.0 * r * r); });
        RadialFunction psi =
            make_function(grid, [](double r) { return 0.5 + 0.5 * std::cos(2.0 * r); });

        std::vector<double> amplitudes = cfg.probe_amplitudes;
        std::vector<double> ratios, margins;
        for (double amp : amplitudes) {
            RadialFunction Ua = U;
            for (auto& v : Ua.values) v *= amp;
            const ProbeReport rep = probe.compare(Ua, V, phi, psi);
            ratios.push_back(rep.lipschitz_ratio);
            margins.push_back(rep.domination_margin);
        }
        write_csv(opt.out_dir + "/probe.csv", {"amplitude", "lipschitz_ratio", "domination_margin"},
                  {amplitudes, ratios, margins});
        write_line_svg(opt.out_dir + "/probe.svg", "Lipschitz ratio vs amplitude", "amplitude",
                       "ratio", {{"ratio", amplitudes, ratios}});

        nlohmann::json report;
        report["meta"] = meta_block(cfg, opt, "probe-contraction", grid.get());
        report["config"] = to_json(exps);
        report["params"] = to_json(params);
        report["amplitudes"] = amplitudes;
        report["lipschitz_ratios"] = ratios;
        report["domination_margins"] = margins;
        double worst_margin = HUGE_VAL;
        for (double m : margins) worst_margin = std::min(worst_margin, m);
        report["pass"] = worst_margin >= -1e-12;
        write_report(opt.out_dir, report);
        std::cout << "domination margin " << worst_margin << ", ratios";
        for (double r : ratios) std::cout << " " << r;
        std::cout << "\n";
        return worst_margin >= -1e-12 ? kExitOk : kExitVerificationFailed;
    } catch (const std::exception& e) {
        return run_error(e);
    }
}

int cmd_audit_exponents(const ExperimentConfig& cfg, const RunOptions& opt) {
    ExponentConfig exps;
    try {
        exps = cfg.config();
        prepare(opt);
    } catch (const std::exception& e) {
        return config_error(e);
    }
    try {
        const IdentityAudit audit = identity_audit(exps);
        double fuzz_worst = 0;
        std::mt19937_64 rng(opt.seed);
        std::uniform_int_distribution<int> dim(2, 5);
        std::uniform_real_distribution<double> unit(0.05, 0.95);
        std::uniform_real_distribution<double> expo(-2.5, 2.5);
        for (int k = 0; k < cfg.audit_fuzz; ++k) {
            const int n = dim(rng);
            const double alpha = n * unit(rng);
            const double floor = alpha / (n - alpha);
            const double p = floor + std::exp(expo(rng));
            fuzz_worst = std::max(fuzz_worst,
                                  identity_audit(make_config(n, alpha, p)).max_abs());
        }
        nlohmann::json report;
        report["meta"] = meta_block(cfg, opt, "audit-exponents", nullptr);
        report["config"] = to_json(exps);
        report["discrepancies"] = {{"critical_relation", audit.critical_relation},
                                   {"product_identity", audit.product_identity},
                                   {"r_identity", audit.r_identity},
                                   {"singular_exponent_u", audit.singular_exponent_u},
                                   {"singular_exponent_v", audit.singular_exponent_v}};
        report["r"] = choose_r(exps);
        report["fuzz_count"] = cfg.audit_fuzz;
        report["fuzz_worst"] = fuzz_worst;
        const bool pass = audit.max_abs() <= 1e-12 && fuzz_worst <= 1e-12;
        report["pass"] = pass;
        write_report(opt.out_dir, report);
        std::cout << "identity discrepancies <= " << std::max(audit.max_abs(), fuzz_worst)
                  << (pass ? " (pass)" : " (fail)") << "\n";
        return pass ? kExitOk : kExitVerificationFailed;
    } catch (const std::exception& e) {
        return run_error(e);
    }
}

} // namespace hlsys::cli
