#include "hlsys/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>

#include "hlsys/parallel.hpp"
#include "hlsys/quadrature.hpp"

namespace hlsys {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Gauss-Gegenbauer rule for the weight (1-t^2)^{(n-3)/2}, cached per dim.
const QuadRule& angular_rule(int dim) {
    static std::map<int, QuadRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(dim);
    if (it == cache.end())
        it = cache.emplace(dim, gauss_gegenbauer(48, 0.5 * (dim - 3))).first;
    return it->second;
}

// complete elliptic integral K with the complementary parameter kc2 = 1 - m
// passed directly; the caller can form it without cancellation
double elliptic_K_comp(double kc2) {
    if (kc2 <= 0.0) return HUGE_VAL;
    if (kc2 < 1e-14) {
        // K(m) ~ log(4 / k') as k' -> 0
        return std::log(4.0) - 0.5 * std::log(kc2);
    }
    return std::comp_ellint_1(std::sqrt(1.0 - kc2));
}

} // namespace

double riesz_kernel_angular(int dim, double alpha, double r, double s) {
    const double nu = 0.5 * (dim - alpha);
    const double sigma = sphere_area(dim - 1);
    const double rr = r * r + s * s;
    const double delta = std::fabs(r - s);

    if (delta >= 0.4 * std::max(r, s)) {
        // well separated: the weight is handled exactly by the rule and the
        // integrand is analytic in a wide Bernstein ellipse
        const QuadRule& rule = angular_rule(dim);
        double acc = 0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k)
            acc += rule.weights[k] * std::pow(rr - 2.0 * r * s * rule.nodes[k], -nu);
        return sigma * acc;
    }

    // near-diagonal: the integrand varies on the angle scale |r-s|/sqrt(rs);
    // resolve it with geometric panels toward t = 0 (the near point)
    const double scale = delta / std::sqrt(r * s);
    int levels = 8;
    if (scale > 0) {
        levels = static_cast<int>(std::ceil(std::log2(M_PI / scale))) + 3;
        levels = std::clamp(levels, 8, 48);
    } else {
        levels = 48;
    }
    const QuadRule& gl = gauss_legendre(16);
    auto integrand = [&](double theta) {
        // (r-s)^2 + 4 r s sin^2(theta/2) avoids the cancellation in
        // r^2 + s^2 - 2 r s cos(theta) when r ~ s and theta is small
        const double sh = std::sin(0.5 * theta);
        const double d2 = delta * delta + 4.0 * r * s * sh * sh;
        double w = std::pow(d2, -nu);
        if (dim > 2) w *= std::pow(std::sin(theta), dim - 2);
        return w;
    };
    double acc = 0;
    double hi = M_PI;
    for (int k = 0; k < levels; ++k) {
        const double lo = hi * 0.5;
        acc += integrate(gl, lo, hi, integrand);
        hi = lo;
    }
    acc += integrate(gl, 0.0, hi, integrand);
    return sigma * acc;
}

double riesz_kernel(int dim, double alpha, double r, double s) {
    if (dim < 2) throw std::domain_error("riesz_kernel: dim >= 2");
    if (!(alpha > 0) || !(alpha < dim))
        throw std::domain_error("riesz_kernel: alpha must lie in (0, dim)");
    if (r < 0 || s < 0) throw std::domain_error("riesz_kernel: radii must be nonnegative");

    if (r == 0.0 || s == 0.0) {
        const double m = std::max(r, s);
        if (m == 0.0) return HUGE_VAL;
        return sphere_area(dim) * std::pow(m, alpha - dim);
    }
    if (dim == 3) {
        if (alpha == 2.0) return 2.0 * kTwoPi / std::max(r, s);
        if (alpha == 1.0) {
            if (r == s) return HUGE_VAL;
            return kTwoPi / (r * s) * std::log((r + s) / std::fabs(r - s));
        }
        const double a1 = alpha - 1.0;
        return kTwoPi / (r * s * a1) *
               (std::pow(r + s, a1) - std::pow(std::fabs(r - s), a1));
    }
    if (dim == 2 && alpha == 1.0) {
        const double sum = r + s;
        const double q = (r - s) / sum;
        return 4.0 * elliptic_K_comp(q * q) / sum;
    }
    if (r == s && alpha <= 1.0) return HUGE_VAL;
    return riesz_kernel_angular(dim, alpha, r, s);
}

// ---------------------------------------------------------------------------
// table construction
// ---------------------------------------------------------------------------

namespace {

struct CellQuad {
    // precomputed far-field rule per interval: abscissae, full weights
    // (Gauss weight x jacobian), and hat parameter lambda = (s-a)/w
    std::vector<double> s, w, lam;
};

// accumulate Int_a^b k(r_i, s) s^{n-1} {1-lam, lam} ds into (w_left, w_right)
class RowAccumulator {
public:
    RowAccumulator(int dim, double alpha, double target)
        : dim_(dim), alpha_(alpha), target_(target) {}

    double left = 0, right = 0;

    void add(double s, double weight, double a, double width) {
        const double lam = (s - a) / width;
        const double v = weight * riesz_kernel(dim_, alpha_, target_, s) *
                         std::pow(s, dim_ - 1);
        left += v * (1.0 - lam);
        right += v * lam;
    }

    void gauss(const QuadRule& rule, double lo, double hi, double a, double width) {
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t k = 0; k < rule.nodes.size(); ++k)
            add(mid + half * rule.nodes[k], half * rule.weights[k], a, width);
    }

    // dyadic panels from `far` toward the singular point `xi`
    void graded(const QuadRule& rule, double xi, double far, double a, double width,
                int levels) {
        const double span = far - xi;  // signed
        if (span == 0.0) return;
        double frac = 1.0;
        for (int k = 0; k < levels; ++k) {
            const double next = frac * 0.5;
            const double lo = xi + span * next, hi = xi + span * frac;
            if (lo < hi)
                gauss(rule, lo, hi, a, width);
            else
                gauss(rule, hi, lo, a, width);
            frac = next;
        }
        const double lo = xi, hi = xi + span * frac;
        if (lo < hi)
            gauss(rule, lo, hi, a, width);
        else
            gauss(rule, hi, lo, a, width);
    }

private:
    int dim_;
    double alpha_;
    double target_;
};

} // namespace

RieszKernelTable RieszKernelTable::build(int dim, double alpha,
                                         std::shared_ptr<const RadialGrid> grid) {
    if (!(alpha > 0) || !(alpha < dim))
        throw std::domain_error("RieszKernelTable: alpha must lie in (0, dim)");
    RieszKernelTable table;
    table.dim_ = dim;
    table.alpha_ = alpha;
    table.grid_ = std::move(grid);
    const auto& nodes = table.grid_->nodes;
    const std::size_t n = nodes.size();
    table.n_ = n;
    table.entries_.assign(n * n, 0.0);

    const QuadRule& gl8 = gauss_legendre(8);

    // far-field abscissae are shared by every row
    std::vector<CellQuad> far(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double a = nodes[j], b = nodes[j + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        far[j].s.resize(gl8.nodes.size());
        far[j].w.resize(gl8.nodes.size());
        far[j].lam.resize(gl8.nodes.size());
        for (std::size_t k = 0; k < gl8.nodes.size(); ++k) {
            far[j].s[k] = mid + half * gl8.nodes[k];
            far[j].w[k] = half * gl8.weights[k];
            far[j].lam[k] = (far[j].s[k] - a) / (b - a);
        }
    }

    double* entries = table.entries_.data();
    parallel_for(n, [&](std::size_t i_begin, std::size_t i_end) {
        for (std::size_t i = i_begin; i < i_end; ++i) {
            const double ri = nodes[i];
            double* row = entries + i * n;
            for (std::size_t j = 0; j + 1 < n; ++j) {
                const double a = nodes[j], b = nodes[j + 1];
                const double w = b - a;
                const double d = ri < a ? a - ri : (ri > b ? ri - b : 0.0);
                RowAccumulator acc(dim, alpha, ri);
                if (d < 0.5 * w) {
                    // the kernel's |r-s| singularity lies inside or next to
                    // this cell: grade toward it from both sides
                    const double xi = std::clamp(ri, a, b);
                    acc.graded(gl8, xi, a, a, w, 14);
                    acc.graded(gl8, xi, b, a, w, 14);
                } else if (d < 4.0 * w) {
                    for (int piece = 0; piece < 4; ++piece)
                        acc.gauss(gl8, a + w * piece / 4.0, a + w * (piece + 1) / 4.0, a, w);
                } else {
                    for (std::size_t k = 0; k < far[j].s.size(); ++k)
                        acc.add(far[j].s[k], far[j].w[k], a, w);
                }
                row[j] += acc.left;
                row[j + 1] += acc.right;
            }
        }
    });

    for (std::size_t idx = 0; idx < table.entries_.size(); ++idx)
        if (!std::isfinite(table.entries_[idx]))
            throw std::runtime_error("RieszKernelTable: non-finite entry at row " +
                                     std::to_string(idx / n) + ", column " +
                                     std::to_string(idx % n) +
                                     " (singular cell mishandled)");
    return table;
}

RieszKernelTable build_kernel_table(const ExponentConfig& cfg,
                                    std::shared_ptr<const RadialGrid> grid) {
    return RieszKernelTable::build(cfg.n, cfg.alpha, std::move(grid));
}

// ---------------------------------------------------------------------------
// tail potential and application
// ---------------------------------------------------------------------------

double tail_potential(const RieszKernelTable& table, double A, double gamma, double r) {
    if (A == 0.0) return 0.0;
    const double alpha = table.alpha();
    const int dim = table.dim();
    const double R = table.grid()->r_max;
    if (!(gamma > alpha))
        throw std::runtime_error("tail_potential: tail exponent gamma <= alpha, potential diverges");

    // Int_R^inf k(r,s) s^{n-1-gamma} ds with s = R/t:
    //   R^{n-gamma} Int_0^1 k(r, R/t) t^{gamma-n-1} dt
    const QuadRule& gl = gauss_legendre(8);
    auto integrand = [&](double t) {
        return riesz_kernel(dim, alpha, r, R / t) * std::pow(t, gamma - dim - 1);
    };
    double acc = 0;
    double hi = 1.0;
    const int levels = 40;
    for (int k = 0; k < levels; ++k) {
        const double lo = 0.5 * hi;
        acc += integrate(gl, lo, hi, integrand);
        hi = lo;
    }
    // stub [0, hi]: the kernel is the monopole sigma_{n-1} s^{alpha-n} there
    acc += sphere_area(dim) * std::pow(R, alpha - dim) * std::pow(hi, gamma - alpha) /
           (gamma - alpha);
    return A * std::pow(R, dim - gamma) * acc;
}

RadialFunction apply_riesz(const RieszKernelTable& table, const RadialFunction& f) {
    const auto& grid = *table.grid();
    if (f.grid.get() != table.grid().get() && f.grid->hash() != grid.hash())
        throw std::invalid_argument("apply_riesz: profile grid does not match the table grid");
    if (f.tail.present() && !(f.tail.gamma > table.alpha()))
        throw std::runtime_error("apply_riesz: input tail gamma <= alpha, potential diverges");

    const std::size_t n = table.size();
    RadialFunction g;
    g.grid = f.grid;
    g.values.assign(n, 0.0);

    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double* row = table.row(i);
            double acc = 0;
            for (std::size_t j = 0; j < n; ++j) acc += row[j] * f.values[j];
            if (f.tail.present())
                acc += tail_potential(table, f.tail.A, f.tail.gamma, grid.nodes[i]);
            g.values[i] = acc;
        }
    });

    // refit the output tail from the outer window when possible
    bool positive = true;
    for (std::size_t i = 0; i < n; ++i)
        if (grid.nodes[i] >= 0.8 * grid.r_max && !(g.values[i] > 0)) positive = false;
    if (positive) {
        try {
            fit_tail(g);
        } catch (const std::exception&) {
            g.tail = TailModel{};
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// brute-force n-D oracle
// ---------------------------------------------------------------------------

namespace {

// distance from the cube center to its boundary along direction w
double cube_exit(const double* w, int dim, double half) {
    double m = 0;
    for (int d = 0; d < dim; ++d) m = std::max(m, std::fabs(w[d]));
    return half / m;
}

} // namespace

double brute_force_riesz(int dim, double alpha,
                         const std::function<double(const std::array<double, 3>&)>& f,
                         const std::array<double, 3>& x,
                         double half_width, int resolution) {
    if (dim != 2 && dim != 3)
        throw std::domain_error("brute_force_riesz: dim must be 2 or 3");
    if (resolution % 2 == 0) ++resolution;  // keep one cell centered on x
    const int m = resolution;
    const double h = 2.0 * half_width / m;
    const int c = (m - 1) / 2;

    double acc = 0;
    std::array<double, 3> y{0, 0, 0};
    if (dim == 2) {
        for (int i = 0; i < m; ++i) {
            y[0] = x[0] + (-half_width + (i + 0.5) * h);
            const double dx = y[0] - x[0];
            for (int j = 0; j < m; ++j) {
                if (i == c && j == c) continue;
                y[1] = x[1] + (-half_width + (j + 0.5) * h);
                const double dy = y[1] - x[1];
                const double dist = std::sqrt(dx * dx + dy * dy);
                acc += f(y) * std::pow(dist, alpha - dim);
            }
        }
    } else {
        for (int i = 0; i < m; ++i) {
            y[0] = x[0] + (-half_width + (i + 0.5) * h);
            const double dx = y[0] - x[0];
            for (int j = 0; j < m; ++j) {
                y[1] = x[1] + (-half_width + (j + 0.5) * h);
                const double dy = y[1] - x[1];
                for (int k = 0; k < m; ++k) {
                    if (i == c && j == c && k == c) continue;
                    y[2] = x[2] + (-half_width + (k + 0.5) * h);
                    const double dz = y[2] - x[2];
                    const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
                    acc += f(y) * std::pow(dist, alpha - dim);
                }
            }
        }
    }
    acc *= std::pow(h, dim);

    // singular cell in polar coordinates about x; the radial weight
    // rho^{alpha-1} is absorbed exactly by rho = rho_max * u^{1/alpha}
    const QuadRule& gl = gauss_legendre(8);
    const double half = 0.5 * h;
    double singular = 0;
    if (dim == 2) {
        const int nphi = 32;
        for (int a = 0; a < nphi; ++a) {
            const double phi = (a + 0.5) * kTwoPi / nphi;
            const double w[2] = {std::cos(phi), std::sin(phi)};
            const double rho_max = cube_exit(w, 2, half);
            double radial = 0;
            for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
                const double u = 0.5 + 0.5 * gl.nodes[k];
                const double rho = rho_max * std::pow(u, 1.0 / alpha);
                y[0] = x[0] + rho * w[0];
                y[1] = x[1] + rho * w[1];
                radial += 0.5 * gl.weights[k] * f(y);
            }
            singular += radial * std::pow(rho_max, alpha) / alpha * (kTwoPi / nphi);
        }
    } else {
        const int nphi = 16, nth = 12;
        for (int b = 0; b < nth; ++b) {
            const double ct = -1.0 + (b + 0.5) * 2.0 / nth;
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            for (int a = 0; a < nphi; ++a) {
                const double phi = (a + 0.5) * kTwoPi / nphi;
                const double w[3] = {st * std::cos(phi), st * std::sin(phi), ct};
                const double rho_max = cube_exit(w, 3, half);
                double radial = 0;
                for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
                    const double u = 0.5 + 0.5 * gl.nodes[k];
                    const double rho = rho_max * std::pow(u, 1.0 / alpha);
                    y[0] = x[0] + rho * w[0];
                    y[1] = x[1] + rho * w[1];
                    y[2] = x[2] + rho * w[2];
                    radial += 0.5 * gl.weights[k] * f(y);
                }
                singular += radial * std::pow(rho_max, alpha) / alpha *
                            (kTwoPi / nphi) * (2.0 / nth);
            }
        }
    }
    return acc + singular;
}

// ---------------------------------------------------------------------------
// binary cache
// ---------------------------------------------------------------------------

namespace {
constexpr std::uint32_t kCacheMagic = 0x524B5431;  // "RKT1"
}

void RieszKernelTable::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("RieszKernelTable::save: cannot open " + path);
    const std::uint32_t magic = kCacheMagic;
    const std::uint32_t dim = dim_;
    const std::uint64_t intervals = grid_->intervals();
    const double r_max = grid_->r_max;
    const double grading = grid_->grading;
    const std::uint64_t hash = grid_->hash();
    out.write(reinterpret_cast<const char*>(&magic), sizeof magic);
    out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
    out.write(reinterpret_cast<const char*>(&alpha_), sizeof alpha_);
    out.write(reinterpret_cast<const char*>(&intervals), sizeof intervals);
    out.write(reinterpret_cast<const char*>(&r_max), sizeof r_max);
    out.write(reinterpret_cast<const char*>(&grading), sizeof grading);
    out.write(reinterpret_cast<const char*>(&hash), sizeof hash);
    out.write(reinterpret_cast<const char*>(entries_.data()),
              std::streamsize(entries_.size() * sizeof(double)));
    if (!out) throw std::runtime_error("RieszKernelTable::save: write failed for " + path);
}

RieszKernelTable RieszKernelTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("RieszKernelTable::load: cannot open " + path);
    std::uint32_t magic = 0, dim = 0;
    double alpha = 0, r_max = 0, grading = 0;
    std::uint64_t intervals = 0, hash = 0;
    in.read(reinterpret_cast<char*>(&magic), sizeof magic);
    in.read(reinterpret_cast<char*>(&dim), sizeof dim);
    in.read(reinterpret_cast<char*>(&alpha), sizeof alpha);
    in.read(reinterpret_cast<char*>(&intervals), sizeof intervals);
    in.read(reinterpret_cast<char*>(&r_max), sizeof r_max);
    in.read(reinterpret_cast<char*>(&grading), sizeof grading);
    in.read(reinterpret_cast<char*>(&hash), sizeof hash);
    if (!in || magic != kCacheMagic)
        throw std::runtime_error("RieszKernelTable::load: bad header in " + path);
    auto grid = make_grid(r_max, int(intervals), grading);
    if (grid->hash() != hash)
        throw std::runtime_error("RieszKernelTable::load: grid hash mismatch in " + path);
    RieszKernelTable table;
    table.dim_ = int(dim);
    table.alpha_ = alpha;
    table.grid_ = grid;
    table.n_ = grid->nodes.size();
    table.entries_.resize(table.n_ * table.n_);
    in.read(reinterpret_cast<char*>(table.entries_.data()),
            std::streamsize(table.entries_.size() * sizeof(double)));
    if (!in) throw std::runtime_error("RieszKernelTable::load: truncated file " + path);
    return table;
}

RieszKernelTable RieszKernelTable::load_or_build(const std::string& path, int dim, double alpha,
                                                 std::shared_ptr<const RadialGrid> grid) {
    std::ifstream probe(path, std::ios::binary);
    if (probe) {
        probe.close();
        RieszKernelTable table = load(path);
        if (table.dim() == dim && table.alpha() == alpha &&
            table.grid()->hash() == grid->hash())
            return table;
    }
    RieszKernelTable table = build(dim, alpha, std::move(grid));
    table.save(path);
    return table;
}

} // namespace hlsys
