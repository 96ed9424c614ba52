#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace hlsys {

/// Surface area of the unit sphere S^{dim-1} in R^dim (sigma_{dim-1}).
/// dim = 1 gives 2 (the two endpoints of an interval).
double sphere_area(int dim);

/// Graded radial mesh on [0, R_max]: nodes r_i = R_max * (i/M)^grading.
/// Larger grading clusters nodes at the origin, where power-law profiles
/// need resolution.  Midpoint cells (one per node) partition [0, R_max].
struct RadialGrid {
    std::vector<double> nodes;       // r_0 = 0 < r_1 < ... < r_M = R_max
    std::vector<double> cell_edges;  // size nodes.size()+1, edges of midpoint cells
    double r_max = 0;
    double grading = 1;

    std::size_t intervals() const { return nodes.empty() ? 0 : nodes.size() - 1; }
    double cell_width(std::size_t i) const { return cell_edges[i + 1] - cell_edges[i]; }

    /// Index j with nodes[j] <= r < nodes[j+1]; clamped at the ends.
    std::size_t locate(double r) const;

    /// FNV-1a over the node coordinates; identifies the mesh in caches.
    std::uint64_t hash() const;
};

std::shared_ptr<const RadialGrid> make_grid(double r_max, int intervals, double grading);

/// Rebuild a grid object from an explicit node list (profile files).
std::shared_ptr<const RadialGrid> grid_from_nodes(std::vector<double> nodes, double grading = 1.0);

/// Power-law extension f(s) ~ A * s^{-gamma} used beyond r_max.
/// A = 0 means the profile is treated as compactly supported.
struct TailModel {
    double A = 0;
    double gamma = 0;

    bool present() const { return A > 0; }
};

/// Node samples of a radial profile plus the tail model.  Between nodes the
/// profile is piecewise linear; all quadrature in the library integrates
/// that interpolant exactly rather than re-sampling.
struct RadialFunction {
    std::shared_ptr<const RadialGrid> grid;
    std::vector<double> values;
    TailModel tail;
    bool clipped_origin = false;  // node 0 holds a clipped stand-in value

    double operator()(double r) const;  // PL inside, tail beyond r_max
    double value_at_origin() const { return values.front(); }
    double value_at_rmax() const { return values.back(); }
    double max_abs() const;

    /// |values[M] - A r_max^{-gamma}| / values[M]; 0 when no tail.
    double tail_seam_error() const;
    bool nonnegative() const;
};

RadialFunction make_function(std::shared_ptr<const RadialGrid> grid,
                             const std::function<double(double)>& f);
RadialFunction zero_function(std::shared_ptr<const RadialGrid> grid);

/// Pointwise power f^e with the tail mapped to (A^e, e*gamma).
RadialFunction pow_profile(const RadialFunction& f, double e);

/// Linear combination a*f + b*g on a shared grid (tails combine only when
/// the exponents agree; otherwise the result is left compact).
RadialFunction axpy(double a, const RadialFunction& f, double b, const RadialFunction& g);

/// L^exponent norm of f over the ball of the given radius in R^dim:
///   ( sigma_{dim-1} * Int_0^radius |f(s)|^exponent s^{dim-1} ds )^{1/exponent}.
/// The integrand uses the piecewise-linear interpolant of f; exponent >= 1.
double lp_norm(int dim, const RadialFunction& f, double exponent, double radius);

struct TailFit {
    TailModel tail;
    double rms_log_residual = 0;  // fit quality in log-log space
    double seam_rel_error = 0;    // model vs last node value
    std::size_t points = 0;
};

/// Least-squares fit of log f against log s over nodes in [w_lo, w_hi];
/// stores the resulting model on f and returns the fit.  Throws when fewer
/// than 4 nodes fall in the window or any window value is nonpositive.
/// Profiles dropping faster than s^{-gamma_cap} are recorded as compact
/// (A = 0): their extension is numerically irrelevant and the coefficient
/// A = f(r) * r^gamma overflows for steep slopes.
TailFit fit_tail(RadialFunction& f, double w_lo, double w_hi, double gamma_cap = 60.0);

/// Default window: the outer 20% of the radius range.
TailFit fit_tail(RadialFunction& f);

} // namespace hlsys
