#pragma once

#include <memory>
#include <vector>

#include "hlsys/exponents.hpp"
#include "hlsys/radial.hpp"
#include "hlsys/riesz.hpp"

namespace hlsys {

enum class Normalization { ValueAtZero, LpNorm };

struct SolverSettings {
    int max_iters = 200;
    // Relative sup-norm change between iterates.  The fixed points form a
    // one-parameter scale family, so the step size floors at the rate of the
    // drift along the family (about 1e-5 at desk-scale grids) rather than at
    // machine precision; the default sits just above that floor.
    double tol = 1e-5;
    double damping = 0.7;  // full update at 1; conservative default
    Normalization normalization = Normalization::ValueAtZero;
};

struct ResidualReport {
    double sup_u = 0, sup_v = 0;  // relative sup residual over [0, r_max/4]
    double lp_u = 0, lq_v = 0;    // relative L^{p+1}, L^{q+1} residual there
    double max_rel() const { return sup_u > sup_v ? sup_u : sup_v; }
};

struct DecayReport {
    double gamma_u = 0, gamma_v = 0;  // fitted tail exponents (raw, may be <= 0)
    double drop_u = 0, drop_v = 0;    // value at r_max over value at 0
    bool decays = false;
};

struct SolverReport {
    std::vector<double> change_history;   // per iteration
    std::vector<double> gamma_u_history;
    std::vector<double> gamma_v_history;
    ResidualReport residual;
    DecayReport decay;
    bool converged = false;
    int iterations = 0;
    double damping_final = 0;
    bool damping_halved = false;
    double amplitude = 1.0;  // gauge multiplier applied to the returned pair
};

struct PicardResult {
    RadialFunction u, v;
    SolverReport report;
};

/// Fixed-point iteration on the composed map u -> I_alpha((I_alpha(u^p))^q)
/// with per-step normalization (the system is scale invariant, so without a
/// gauge the iterates drift along the solution family).  The returned pair
/// is rescaled by the amplitude that removes the normalization gauge, so
/// its residual is meaningful.  Non-convergence is reported, not thrown;
/// a diverging tail exponent (gamma <= alpha on a powered iterate) throws.
PicardResult picard_solve(const ExponentConfig& cfg, const RieszKernelTable& table,
                          const RadialFunction& u0, const SolverSettings& settings = {});

/// Relative defect of the pair in both equations over [0, r_max/4].
ResidualReport system_residual(const ExponentConfig& cfg, const RieszKernelTable& table,
                               const RadialFunction& u, const RadialFunction& v);

/// Fitted tail exponents plus the crude value-drop check u(r_max) <= u(0)/100.
DecayReport decay_check(const RadialFunction& u, const RadialFunction& v);

/// Parameters of the cutoff double-potential map
///   T(phi)(x) = eta(x) Int_{B_R} V(y) |x-y|^{beta-n}
///                 [ Int_{B_R} U(z) |phi(z)|^r |y-z|^{alpha-n} dz ]^{1/r} dy,
/// subject to 1/(r a) + 1/b = alpha/(r n) + beta/n.
struct ProbeParams {
    int dim = 3;
    double alpha = 2, beta = 2;
    double r = 1;
    double a = 1.5, b = 1.5;
    double R = 1;
    double p = 6;  // exponent of the L^p norm used for the Lipschitz ratio
};

/// The instance arising from a system config with the standard choice
/// r = P - (alpha/n)(P+1), a = (P+1)/(P-r), b = (Q+1)/(Q-1/r), P = max(p,q).
ProbeParams probe_params_from(const ExponentConfig& cfg, double R);

struct ProbeReport {
    double domination_margin = 0;  // min over nodes of T(|phi-psi|) - |T(phi)-T(psi)|
    double lipschitz_ratio = 0;    // ||T(phi)-T(psi)||_p / ||phi-psi||_p
};

class ContractionProbe {
public:
    ContractionProbe(const ProbeParams& params, std::shared_ptr<const RadialGrid> grid);

    const ProbeParams& params() const { return params_; }
    RadialFunction apply(const RadialFunction& U, const RadialFunction& V,
                         const RadialFunction& phi) const;
    ProbeReport compare(const RadialFunction& U, const RadialFunction& V,
                        const RadialFunction& phi, const RadialFunction& psi) const;

private:
    ProbeParams params_;
    std::shared_ptr<const RadialGrid> grid_;
    RieszKernelTable inner_, outer_;
    std::vector<double> eta_;  // cubic ramp, 1 on [0, R/2], 0 at R
};

} // namespace hlsys
