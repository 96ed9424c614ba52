#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "hlsys/exponents.hpp"
#include "hlsys/radial.hpp"
#include "hlsys/riesz.hpp"

namespace hlsys {

/// Bilinear functional J(f, g) = Int Int f(x) g(y) |x-y|^{alpha-n} dx dy
/// for radial f, g, evaluated as sigma_{n-1} Int f(r) (I_alpha g)(r) r^{n-1} dr
/// through the kernel table.  The discrete form is symmetrized so that
/// J(f, g) = J(g, f) holds exactly.  Throws when the tail exponents make
/// the double integral divergent.
double hls_functional(const ExponentConfig& cfg, const RieszKernelTable& table,
                      const RadialFunction& f, const RadialFunction& g);

struct AscentSettings {
    double tol = 1e-8;        // relative J change between half-steps
    int max_half_steps = 500;
};

struct AscentReport {
    std::vector<double> j_history;  // one entry per half-step
    double final_j = 0;
    int half_steps = 0;
    bool converged = false;
    RadialFunction f, g;
};

/// Alternating maximization of J over { |f|_{p0} = |g|_{q0} = 1, f, g >= 0 }:
/// each half-step replaces one factor by the profile saturating Holder's
/// inequality against the current potential (g = h^{q0'-1} / |h^{q0'-1}|_{q0}
/// with h = I_alpha f), which cannot decrease J.  The same quadrature
/// weights are used for J and for the norms, so the discrete J history is
/// nondecreasing up to roundoff by construction.
AscentReport alternating_ascent(const ExponentConfig& cfg, const RieszKernelTable& table,
                                const RadialFunction& f0, const AscentSettings& settings = {});

/// The profile family (lambda / (lambda^2 + r^2))^{n/p0} (unnormalized);
/// for p0 = q0 the maximizing pair is of this shape.
RadialFunction maximizer_profile(const ExponentConfig& cfg,
                                 std::shared_ptr<const RadialGrid> grid,
                                 double lambda = 1.0);

/// Substitution u = f^{p0-1}, v = g^{q0-1} carrying maximizers to
/// candidate solutions of the integral system (tails transform too).
std::pair<RadialFunction, RadialFunction>
maximizer_to_solution(const ExponentConfig& cfg, const RadialFunction& f,
                      const RadialFunction& g);

struct RescaleReport {
    double mult_u = 1, mult_v = 1;  // scalars applied to u and v
    double theta_u = 0, theta_v = 0;  // fitted proportionality constants
};

/// Fix the Lagrange-multiplier scale: fit I(v^q) ~ theta_u u and
/// I(u^p) ~ theta_v v by weighted least squares over [0, r_max/4] and scale
/// the pair so both proportionalities become 1.  Modifies u, v in place.
RescaleReport solution_rescale(const ExponentConfig& cfg, const RieszKernelTable& table,
                               RadialFunction& u, RadialFunction& v);

} // namespace hlsys
