#include "hlsys/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hlsys {

std::size_t CartesianField::node_count() const {
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= std::size_t(counts[a]);
    return n;
}

std::size_t CartesianField::index(int i, int j, int k) const {
    if (dim == 2) return std::size_t(i) * counts[1] + j;
    return (std::size_t(i) * counts[1] + j) * counts[2] + k;
}

double CartesianField::max_value() const {
    double m = 0;
    for (double v : values) m = std::max(m, v);
    return m;
}

double CartesianField::max_boundary_value() const {
    double m = 0;
    const int ni = counts[0], nj = counts[1], nk = dim == 3 ? counts[2] : 1;
    for (int i = 0; i < ni; ++i)
        for (int j = 0; j < nj; ++j)
            for (int k = 0; k < nk; ++k) {
                const bool edge = i == 0 || i == ni - 1 || j == 0 || j == nj - 1 ||
                                  (dim == 3 && (k == 0 || k == nk - 1));
                if (edge) m = std::max(m, values[index(i, j, k)]);
            }
    return m;
}

CartesianField sample_field(int dim, const std::function<double(double)>& radial,
                            const std::array<double, 3>& center, double lo, double hi,
                            double spacing) {
    if (dim != 2 && dim != 3) throw std::domain_error("sample_field: dim must be 2 or 3");
    if (!(spacing > 0) || !(hi > lo)) throw std::invalid_argument("sample_field: bad box");
    for (int a = 0; a < dim; ++a)
        if (center[a] < lo || center[a] > hi)
            throw std::invalid_argument("sample_field: center lies outside the box");

    CartesianField f;
    f.dim = dim;
    f.spacing = spacing;
    const int count = int(std::lround((hi - lo) / spacing)) + 1;
    for (int a = 0; a < dim; ++a) {
        f.origin[a] = lo;
        f.counts[a] = count;
    }
    f.values.resize(f.node_count());
    const int nk = dim == 3 ? count : 1;
    for (int i = 0; i < count; ++i)
        for (int j = 0; j < count; ++j)
            for (int k = 0; k < nk; ++k) {
                const double dx = f.coord(0, i) - center[0];
                const double dy = f.coord(1, j) - center[1];
                const double dz = dim == 3 ? f.coord(2, k) - center[2] : 0.0;
                f.values[f.index(i, j, k)] = radial(std::sqrt(dx * dx + dy * dy + dz * dz));
            }
    f.radial_source = radial;
    f.source_center = center;
    f.has_source = true;
    return f;
}

namespace {

// value at a point displaced along `axis` to coordinate x (other coordinates
// on-grid); linear interpolation between the two bracketing planes
bool axis_interp(const CartesianField& f, int axis, double x, int i, int j, int k,
                 double& out) {
    const double t = (x - f.origin[axis]) / f.spacing;
    const int last = f.counts[axis] - 1;
    if (t < 0.0 || t > double(last)) return false;
    int i0 = int(std::floor(t));
    if (i0 >= last) i0 = last - 1;
    const double frac = t - i0;
    int a0 = i, b0 = j, c0 = k, a1 = i, b1 = j, c1 = k;
    if (axis == 0) { a0 = i0; a1 = i0 + 1; }
    if (axis == 1) { b0 = i0; b1 = i0 + 1; }
    if (axis == 2) { c0 = i0; c1 = i0 + 1; }
    const std::size_t lo = f.index(a0, b0, c0), hi = f.index(a1, b1, c1);
    if (!f.is_valid(lo) || !f.is_valid(hi)) return false;
    out = f.values[lo] * (1.0 - frac) + f.values[hi] * frac;
    return true;
}

} // namespace

CartesianField reflect(const CartesianField& field, int axis, double lambda) {
    if (axis < 0 || axis >= field.dim) throw std::invalid_argument("reflect: bad axis");
    CartesianField out = field;
    out.valid.assign(field.node_count(), 1);
    const int ni = field.counts[0], nj = field.counts[1];
    const int nk = field.dim == 3 ? field.counts[2] : 1;
    for (int i = 0; i < ni; ++i)
        for (int j = 0; j < nj; ++j)
            for (int k = 0; k < nk; ++k) {
                const std::size_t idx = field.index(i, j, k);
                const int axis_idx = axis == 0 ? i : (axis == 1 ? j : k);
                const double xr = 2.0 * lambda - field.coord(axis, axis_idx);
                double v;
                if (axis_interp(field, axis, xr, i, j, k, v)) {
                    out.values[idx] = v;
                } else if (field.has_source) {
                    double d2 = 0;
                    for (int a = 0; a < field.dim; ++a) {
                        const int ia = a == 0 ? i : (a == 1 ? j : k);
                        const double xa = a == axis ? xr : field.coord(a, ia);
                        const double d = xa - field.source_center[a];
                        d2 += d * d;
                    }
                    out.values[idx] = field.radial_source(std::sqrt(d2));
                } else {
                    out.values[idx] = 0;
                    out.valid[idx] = 0;
                }
            }
    if (field.has_source) {
        out.source_center[axis] = 2.0 * lambda - field.source_center[axis];
    }
    return out;
}

CartesianField mirror(const CartesianField& field, int axis) {
    const double pivot = field.origin[axis] +
                         0.5 * field.spacing * (field.counts[axis] - 1);
    CartesianField out = field;
    const int ni = field.counts[0], nj = field.counts[1];
    const int nk = field.dim == 3 ? field.counts[2] : 1;
    for (int i = 0; i < ni; ++i)
        for (int j = 0; j < nj; ++j)
            for (int k = 0; k < nk; ++k) {
                int mi = i, mj = j, mk = k;
                if (axis == 0) mi = ni - 1 - i;
                if (axis == 1) mj = nj - 1 - j;
                if (axis == 2) mk = nk - 1 - k;
                out.values[out.index(i, j, k)] = field.values[field.index(mi, mj, mk)];
                if (!field.valid.empty())
                    out.valid[out.index(i, j, k)] = field.valid[field.index(mi, mj, mk)];
            }
    if (field.has_source)
        out.source_center[axis] = 2.0 * pivot - field.source_center[axis];
    return out;
}

BadSet bad_set(const CartesianField& field, int axis, double lambda, double tol) {
    const CartesianField refl = reflect(field, axis, lambda);
    BadSet bs;
    const int ni = field.counts[0], nj = field.counts[1];
    const int nk = field.dim == 3 ? field.counts[2] : 1;
    for (int i = 0; i < ni; ++i)
        for (int j = 0; j < nj; ++j)
            for (int k = 0; k < nk; ++k) {
                const int axis_idx = axis == 0 ? i : (axis == 1 ? j : k);
                if (!(field.coord(axis, axis_idx) < lambda)) continue;
                const std::size_t idx = field.index(i, j, k);
                if (!field.is_valid(idx) || !refl.is_valid(idx)) {
                    ++bs.uncovered;
                    continue;
                }
                if (refl.values[idx] > field.values[idx] + tol) bs.cells.push_back(idx);
            }
    bs.measure = double(bs.cells.size()) * std::pow(field.spacing, field.dim);
    return bs;
}

double empirical_lambda0(const CartesianField& field, int axis, double tol) {
    if (field.max_boundary_value() > 0.01 * field.max_value())
        throw std::runtime_error("empirical_lambda0: field does not decay toward the box boundary");
    const int count = field.counts[axis];
    auto empty_at = [&](int k) { return bad_set(field, axis, field.coord(axis, k), tol).empty(); };

    // plane emptiness is monotone right of the maximum; bisect there, then
    // verify the tail of planes above the candidate
    if (!empty_at(count - 1)) return field.coord(axis, count - 1);
    int lo = 0, hi = count - 1;
    if (empty_at(0)) {
        // vacuously empty at the far left; scan for the leftmost nonempty
        // plane to anchor the bisection
        int first_bad = -1;
        for (int k = 1; k < count; ++k)
            if (!empty_at(k)) {
                first_bad = k;
                break;
            }
        if (first_bad < 0) return field.coord(axis, 0);
        lo = first_bad;
    }
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        if (empty_at(mid))
            hi = mid;
        else
            lo = mid;
    }
    // verification sweep: make "empty for all sampled lambda >= lambda*" literal
    for (int k = hi; k < count; ++k)
        if (!empty_at(k)) {
            hi = k + 1;
            k = hi - 1;
        }
    return field.coord(axis, hi);
}

SymmetryReport center_and_monotonicity_report(const CartesianField& field, double tol) {
    SymmetryReport rep;
    for (int axis = 0; axis < field.dim; ++axis) {
        const double lp = empirical_lambda0(field, axis, tol);
        const CartesianField mirrored = mirror(field, axis);
        const double lm_m = empirical_lambda0(mirrored, axis, tol);
        const double span = field.coord(axis, 0) + field.coord(axis, field.counts[axis] - 1);
        const double lm = span - lm_m;  // mapped back to original coordinates
        rep.lambda_plus[axis] = lp;
        rep.lambda_minus[axis] = lm;
        rep.center[axis] = 0.5 * (lp + lm);
        rep.center_err[axis] = 0.5 * std::fabs(lp - lm) + field.spacing;
    }

    // nearest node to the center estimate
    int c[3] = {0, 0, 0};
    for (int a = 0; a < field.dim; ++a) {
        c[a] = int(std::lround((rep.center[a] - field.origin[a]) / field.spacing));
        c[a] = std::clamp(c[a], 0, field.counts[a] - 1);
    }

    // 2*dim axis directions plus 2^dim diagonals
    std::vector<std::array<int, 3>> dirs;
    for (int a = 0; a < field.dim; ++a)
        for (int s : {-1, 1}) {
            std::array<int, 3> d{0, 0, 0};
            d[a] = s;
            dirs.push_back(d);
        }
    const int corners = 1 << field.dim;
    for (int mask = 0; mask < corners; ++mask) {
        std::array<int, 3> d{0, 0, 0};
        for (int a = 0; a < field.dim; ++a) d[a] = (mask >> a) & 1 ? 1 : -1;
        dirs.push_back(d);
    }

    rep.radial_decrease = true;
    rep.worst_violation = -HUGE_VAL;
    for (const auto& d : dirs) {
        int i = c[0], j = c[1], k = c[2];
        double prev = field.values[field.index(i, j, k)];
        for (int step = 0;; ++step) {
            i += d[0];
            j += d[1];
            k += d[2];
            if (i < 0 || i >= field.counts[0] || j < 0 || j >= field.counts[1]) break;
            if (field.dim == 3 && (k < 0 || k >= field.counts[2])) break;
            const double cur = field.values[field.index(i, j, k)];
            const double delta = cur - prev;  // must be negative
            const bool bad = step == 0 ? delta > 0 : delta > -tol;
            if (delta > rep.worst_violation) {
                rep.worst_violation = delta;
                rep.violation_at = {field.coord(0, i), field.coord(1, j),
                                    field.dim == 3 ? field.coord(2, k) : 0.0};
            }
            if (bad) rep.radial_decrease = false;
            prev = cur;
        }
    }
    return rep;
}

bool theta_inequality_check(double theta, double a, double b, double c) {
    if (!(theta > 0) || !(theta <= 1))
        throw std::domain_error("theta_inequality_check: need 0 < theta <= 1");
    if (!(a >= b) || !(b >= 0) || !(c >= 0))
        throw std::domain_error("theta_inequality_check: need a >= b >= 0 and c >= 0");
    const double lhs = std::pow(a + c, theta) - std::pow(b + c, theta);
    const double rhs = std::pow(a, theta) - std::pow(b, theta);
    return lhs <= rhs + 1e-12;
}

} // namespace hlsys
