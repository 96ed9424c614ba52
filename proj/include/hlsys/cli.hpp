#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hlsys/exponents.hpp"
#include "hlsys/solver.hpp"
#include "hlsys/hls.hpp"

namespace hlsys::cli {

// exit-code contract: 0 pass, 1 verification/convergence failure, 2 usage/config error
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitConfigError = 2;

struct RunOptions {
    std::string out_dir = "out";
    std::uint64_t seed = 12345;
    bool strict = false;
    unsigned jobs = 0;  // 0 = hardware concurrency
};

/// One experiment per JSON document; CLI flags override file fields.
struct ExperimentConfig {
    nlohmann::json exponents = {{"n", 3}, {"alpha", 2.0}, {"p", 5.0}};
    double r_max = 20.0;
    int intervals = 1200;
    double grading = 2.0;

    SolverSettings solver;
    std::string solve_start = "gaussian";  // gaussian | bubble | indicator | file
    std::string solve_start_file;

    AscentSettings ascent;
    std::string ascent_start = "maximizer";  // maximizer | indicator | random

    int sym_dim = 2;
    double sym_lo = -4.0, sym_hi = 4.0, sym_spacing = 0.05;
    std::array<double, 3> sym_center{0.3, -0.2, 0.0};
    std::string sym_source = "maximizer";  // maximizer | bubble | file
    std::string sym_source_file;
    double sym_center_tol = 0.1;
    double sym_dump_lambda = std::nan("");  // dump bad-set cells at this plane if set

    double probe_R = 1.0;
    std::vector<double> probe_amplitudes{1.0, 0.5, 0.25};

    double bubble_lambda = 1.0;
    double verify_threshold = 1e-4;
    int audit_fuzz = 10000;

    std::string kernel_cache;  // optional path for the binary kernel cache

    ExponentConfig config() const { return config_from_exponents(exponents); }
    static ExponentConfig config_from_exponents(const nlohmann::json& j);

    /// Canonical JSON of every resolved field (hash input + report metadata).
    nlohmann::json resolved() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json_doc(const nlohmann::json& doc);

int cmd_verify_bubble(const ExperimentConfig& cfg, const RunOptions& opt);
int cmd_verify_singular(const ExperimentConfig& cfg, const RunOptions& opt);
int cmd_solve(const ExperimentConfig& cfg, const RunOptions& opt);
int cmd_sharp_constant(const ExperimentConfig& cfg, const RunOptions& opt);
int cmd_symmetry(const ExperimentConfig& cfg, const RunOptions& opt);
int cmd_probe_contraction(const ExperimentConfig& cfg, const RunOptions& opt);
int cmd_audit_exponents(const ExperimentConfig& cfg, const RunOptions& opt);

} // namespace hlsys::cli
