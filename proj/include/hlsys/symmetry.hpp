#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace hlsys {

/// Uniform node-centered sample of a nonnegative function on a cube in
/// R^dim (dim = 2 or 3).  An optional radial source (profile + center)
/// answers queries that leave the box, e.g. under reflections.
struct CartesianField {
    int dim = 2;
    std::array<double, 3> origin{};   // minimum corner
    double spacing = 0;
    std::array<int, 3> counts{1, 1, 1};
    std::vector<double> values;
    std::vector<std::uint8_t> valid;  // empty = everything valid

    std::function<double(double)> radial_source;
    std::array<double, 3> source_center{};
    bool has_source = false;

    std::size_t node_count() const;
    std::size_t index(int i, int j, int k = 0) const;
    double coord(int axis, int idx) const { return origin[axis] + spacing * idx; }
    bool is_valid(std::size_t idx) const { return valid.empty() || valid[idx] != 0; }
    double max_value() const;
    double max_boundary_value() const;
};

/// Sample a radial profile about `center` on the cube [lo, hi]^dim.
/// Throws when the center is outside the box.
CartesianField sample_field(int dim, const std::function<double(double)>& radial,
                            const std::array<double, 3>& center, double lo, double hi,
                            double spacing);

/// u_lambda(x) = u(2 lambda - x_axis, x') via linear interpolation along the
/// axis.  Queries leaving the box use the attached radial source; without
/// one the node is marked invalid (never silently extrapolated).
CartesianField reflect(const CartesianField& field, int axis, double lambda);

/// Mirror the field across the box midplane of the axis (relabeling).
CartesianField mirror(const CartesianField& field, int axis);

struct BadSet {
    std::vector<std::size_t> cells;  // node indices with x_axis < lambda and
                                     // reflected value > value + tol
    double measure = 0;              // count * spacing^dim
    std::size_t uncovered = 0;       // half-space nodes whose reflection was unavailable
    bool empty() const { return cells.empty(); }
};

BadSet bad_set(const CartesianField& field, int axis, double lambda, double tol);

/// Smallest sampled plane lambda* such that the bad set is empty for every
/// sampled lambda >= lambda* (plane spacing = grid spacing, so the answer
/// carries a +-spacing error bar).  Bisection plus an upward verification
/// sweep.  Requires decay: max boundary value <= 1% of the max value.
double empirical_lambda0(const CartesianField& field, int axis, double tol);

struct SymmetryReport {
    std::array<double, 3> center{};
    std::array<double, 3> center_err{};   // half-gap of the two stopping planes + h
    bool radial_decrease = false;
    double worst_violation = 0;           // most positive step increase along rays
    std::array<double, 3> violation_at{};
    std::array<double, 3> lambda_plus{};  // stopping planes per axis
    std::array<double, 3> lambda_minus{};
};

/// Runs empirical_lambda0 along every axis in both orientations, intersects
/// the stopping planes into a center estimate, then checks strict decrease
/// along the 2*dim axis rays and 2^dim diagonal rays from the center cell.
/// The first step away from the center tolerates a plateau (clipped-origin
/// profiles); later steps must decrease by more than `tol`.
SymmetryReport center_and_monotonicity_report(const CartesianField& field, double tol);

/// (a+c)^theta - (b+c)^theta <= a^theta - b^theta + 1e-12 for
/// 0 < theta <= 1, a >= b >= 0, c >= 0.  Preconditions throw.
bool theta_inequality_check(double theta, double a, double b, double c);

} // namespace hlsys
