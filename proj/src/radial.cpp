#include "hlsys/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include "hlsys/quadrature.hpp"

namespace hlsys {

double sphere_area(int dim) {
    if (dim < 1) throw std::domain_error("sphere_area: dim >= 1");
    return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
}

std::size_t RadialGrid::locate(double r) const {
    if (r <= 0) return 0;
    if (r >= nodes.back()) return nodes.size() - 2;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
    return static_cast<std::size_t>(it - nodes.begin()) - 1;
}

std::uint64_t RadialGrid::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* data, std::size_t len) {
        const unsigned char* b = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    mix(nodes.data(), nodes.size() * sizeof(double));
    return h;
}

std::shared_ptr<const RadialGrid> make_grid(double r_max, int intervals, double grading) {
    if (!(r_max > 0)) throw std::domain_error("make_grid: r_max must be positive");
    if (intervals < 16) throw std::invalid_argument("make_grid: need at least 16 intervals");
    if (!(grading >= 1.0)) throw std::invalid_argument("make_grid: grading must be >= 1");
    auto g = std::make_shared<RadialGrid>();
    g->r_max = r_max;
    g->grading = grading;
    g->nodes.resize(intervals + 1);
    for (int i = 0; i <= intervals; ++i)
        g->nodes[i] = r_max * std::pow(double(i) / intervals, grading);
    g->nodes.front() = 0.0;
    g->nodes.back() = r_max;
    g->cell_edges.resize(intervals + 2);
    g->cell_edges.front() = 0.0;
    g->cell_edges.back() = r_max;
    for (int i = 1; i <= intervals; ++i)
        g->cell_edges[i] = 0.5 * (g->nodes[i - 1] + g->nodes[i]);
    return g;
}

std::shared_ptr<const RadialGrid> grid_from_nodes(std::vector<double> nodes, double grading) {
    if (nodes.size() < 2) throw std::invalid_argument("grid_from_nodes: need at least 2 nodes");
    if (nodes.front() != 0.0) throw std::invalid_argument("grid_from_nodes: first node must be 0");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw std::invalid_argument("grid_from_nodes: nodes must be strictly increasing");
    auto g = std::make_shared<RadialGrid>();
    g->r_max = nodes.back();
    g->grading = grading;
    g->cell_edges.resize(nodes.size() + 1);
    g->cell_edges.front() = 0.0;
    g->cell_edges.back() = g->r_max;
    for (std::size_t i = 1; i < nodes.size(); ++i)
        g->cell_edges[i] = 0.5 * (nodes[i - 1] + nodes[i]);
    g->nodes = std::move(nodes);
    return g;
}

double RadialFunction::operator()(double r) const {
    const auto& nodes = grid->nodes;
    if (r >= grid->r_max) {
        if (r == grid->r_max || !tail.present())
            return r == grid->r_max ? values.back() : 0.0;
        return tail.A * std::pow(r, -tail.gamma);
    }
    if (r <= 0) return values.front();
    const std::size_t j = grid->locate(r);
    const double w = nodes[j + 1] - nodes[j];
    const double t = (r - nodes[j]) / w;
    return values[j] * (1.0 - t) + values[j + 1] * t;
}

double RadialFunction::max_abs() const {
    double m = 0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return m;
}

double RadialFunction::tail_seam_error() const {
    if (!tail.present()) return 0.0;
    const double model = tail.A * std::pow(grid->r_max, -tail.gamma);
    const double last = values.back();
    if (last == 0.0) return model == 0.0 ? 0.0 : HUGE_VAL;
    return std::fabs(last - model) / std::fabs(last);
}

bool RadialFunction::nonnegative() const {
    for (double v : values)
        if (!(v >= 0) || !std::isfinite(v)) return false;
    return true;
}

RadialFunction make_function(std::shared_ptr<const RadialGrid> grid,
                             const std::function<double(double)>& f) {
    RadialFunction out;
    out.grid = std::move(grid);
    out.values.resize(out.grid->nodes.size());
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = f(out.grid->nodes[i]);
    return out;
}

RadialFunction zero_function(std::shared_ptr<const RadialGrid> grid) {
    RadialFunction out;
    out.grid = std::move(grid);
    out.values.assign(out.grid->nodes.size(), 0.0);
    return out;
}

RadialFunction pow_profile(const RadialFunction& f, double e) {
    RadialFunction out = f;
    for (auto& v : out.values) v = std::pow(v, e);
    if (f.tail.present()) {
        out.tail.A = std::pow(f.tail.A, e);
        out.tail.gamma = f.tail.gamma * e;
        if (!std::isfinite(out.tail.A)) out.tail = TailModel{};
    }
    return out;
}

RadialFunction axpy(double a, const RadialFunction& f, double b, const RadialFunction& g) {
    if (f.grid.get() != g.grid.get() && f.grid->hash() != g.grid->hash())
        throw std::invalid_argument("axpy: profiles live on different grids");
    RadialFunction out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = a * f.values[i] + b * g.values[i];
    if (f.tail.present() && g.tail.present() && f.tail.gamma == g.tail.gamma) {
        out.tail.A = a * f.tail.A + b * g.tail.A;
        out.tail.gamma = f.tail.gamma;
        if (!(out.tail.A > 0)) out.tail = TailModel{};
    } else if (f.tail.present() && !g.tail.present()) {
        out.tail = f.tail;
        out.tail.A *= a;
        if (!(out.tail.A > 0)) out.tail = TailModel{};
    } else if (g.tail.present() && !f.tail.present()) {
        out.tail = g.tail;
        out.tail.A *= b;
        if (!(out.tail.A > 0)) out.tail = TailModel{};
    } else {
        out.tail = TailModel{};
    }
    return out;
}

double lp_norm(int dim, const RadialFunction& f, double exponent, double radius) {
    if (!(exponent >= 1.0))
        throw std::domain_error("lp_norm: exponent must be >= 1, got " + std::to_string(exponent));
    if (!(radius > 0)) return 0.0;
    if (radius > f.grid->r_max * (1.0 + 1e-12))
        throw std::invalid_argument("lp_norm: radius exceeds the grid range");
    radius = std::min(radius, f.grid->r_max);

    const auto& nodes = f.grid->nodes;
    const QuadRule& rule = gauss_legendre(8);
    double acc = 0;
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
        const double a = nodes[j];
        if (a >= radius) break;
        const double b = std::min(nodes[j + 1], radius);
        const double va = f.values[j], vb = f.values[j + 1];
        const double w = nodes[j + 1] - nodes[j];
        acc += integrate(rule, a, b, [&](double s) {
            const double t = (s - nodes[j]) / w;
            const double val = va * (1.0 - t) + vb * t;
            return std::pow(std::fabs(val), exponent) * std::pow(s, dim - 1);
        });
    }
    return std::pow(sphere_area(dim) * acc, 1.0 / exponent);
}

TailFit fit_tail(RadialFunction& f, double w_lo, double w_hi, double gamma_cap) {
    if (!(w_lo > 0) || !(w_hi > w_lo) || w_hi > f.grid->r_max * (1.0 + 1e-12))
        throw std::invalid_argument("fit_tail: window must satisfy 0 < lo < hi <= r_max");
    const auto& nodes = f.grid->nodes;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] < w_lo || nodes[i] > w_hi) continue;
        if (!(f.values[i] > 0))
            throw std::runtime_error("fit_tail: nonpositive value inside the fit window");
        xs.push_back(std::log(nodes[i]));
        ys.push_back(std::log(f.values[i]));
    }
    if (xs.size() < 4)
        throw std::runtime_error("fit_tail: fewer than 4 nodes in the fit window");

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= xs.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;

    TailFit fit;
    fit.points = xs.size();
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        ss += r * r;
    }
    fit.rms_log_residual = std::sqrt(ss / xs.size());

    const double gamma = -slope;
    fit.tail.gamma = gamma;
    fit.tail.A = std::exp(intercept);
    if (fit.tail.present()) {
        const double model = fit.tail.A * std::pow(f.grid->r_max, -fit.tail.gamma);
        fit.seam_rel_error = std::fabs(model - f.values.back()) /
                             std::max(std::fabs(f.values.back()), 1e-300);
    }
    // Store a usable extension only: gamma must be a genuine decay rate and
    // A representable.  Steeper-than-cap profiles are treated as compact.
    if (gamma > 0 && gamma <= gamma_cap && std::isfinite(fit.tail.A))
        f.tail = fit.tail;
    else
        f.tail = TailModel{};
    return fit;
}

TailFit fit_tail(RadialFunction& f) {
    return fit_tail(f, 0.8 * f.grid->r_max, f.grid->r_max);
}

} // namespace hlsys
