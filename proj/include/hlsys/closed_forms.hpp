#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "hlsys/exponents.hpp"
#include "hlsys/radial.hpp"
#include "hlsys/riesz.hpp"

namespace hlsys {

/// Scale/normalization of the explicit profile
///   u(r) = c * (lambda / (lambda^2 + r^2))^{(n-alpha)/2},
/// the regular solution family of the single-equation (p = q) case.
struct BubbleParams {
    double lambda = 1.0;
    double c = 1.0;
};

/// Sample the bubble on a grid.  The tail is attached analytically:
/// gamma = n - alpha, A = c * lambda^{(n-alpha)/2}.  Requires a conformal
/// config (p = q = (n+alpha)/(n-alpha)); throws std::invalid_argument else.
RadialFunction bubble_profile(const ExponentConfig& cfg, const BubbleParams& params,
                              std::shared_ptr<const RadialGrid> grid);

/// Pointwise ratio rho(r) = I_alpha(u_b^p)(r) / u_b(r) over [0, r_max/2].
/// For an exact solution family the ratio is a constant; its mean recovers
/// the proportionality constant and its spread measures discretization error.
struct BubbleReport {
    double ratio_mean = 0;
    double ratio_spread = 0;  // (max - min) / mean
    std::vector<double> radii;
    std::vector<double> ratio;
};

BubbleReport verify_bubble(const ExponentConfig& cfg, const RieszKernelTable& table,
                           const BubbleParams& params = {});

/// Exact unbounded solution pair u = c_u r^{-n/(p+1)}, v = c_v r^{-n/(q+1)}.
struct SingularPair {
    double c_u = 0, c_v = 0;
    double exp_u = 0;  // n/(p+1)
    double exp_v = 0;  // n/(q+1)
};

struct SingularReport {
    SingularPair pair;
    double gamma_u = 0;      // measured ratio I(s^{-np/(p+1)})(r) / r^{-n/(q+1)}
    double gamma_v = 0;
    double flat_u = 0;       // (max-min)/mean of the ratio over the annulus
    double flat_v = 0;
    double residual = 0;     // relative system residual of the solved pair
    double annulus_lo = 0, annulus_hi = 0;
    std::vector<double> radii, ratio_u, ratio_v;
};

/// Measure the ratio constants on the annulus [r_max/20, r_max/4] and solve
/// for (c_u, c_v).  Throws std::runtime_error when a measured ratio is not
/// constant within 1e-2 over the annulus (discretization failure).
SingularReport singular_pair(const ExponentConfig& cfg, const RieszKernelTable& table);

/// Node samples of the solved singular pair; node 0 carries the clipped
/// stand-in value (the profile is genuinely unbounded at the origin).
std::pair<RadialFunction, RadialFunction>
singular_profiles(std::shared_ptr<const RadialGrid> grid, const SingularPair& pair);

/// The scaling symmetry u'(r) = lambda^{n/(p+1)} u(lambda r),
/// v'(r) = lambda^{n/(q+1)} v(lambda r).  The result lives on the scaled
/// grid (r_max / lambda, same interval count and grading), whose node i
/// sits exactly at r_i / lambda; values therefore transport exactly and a
/// solution maps to a solution with no interpolation error.
struct ScaledPair {
    RadialFunction u, v;
};

ScaledPair scale_transform(const RadialFunction& u, const RadialFunction& v,
                           const ExponentConfig& cfg, double lambda);

/// Resample onto another grid through the interpolant and tail model.
/// Sets *used_tail when values beyond the source data were required; throws
/// when they were required but no tail model is attached.
RadialFunction resample_to(const RadialFunction& f,
                           std::shared_ptr<const RadialGrid> grid,
                           bool* used_tail = nullptr);

} // namespace hlsys
