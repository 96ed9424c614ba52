#include "hlsys/closed_forms.hpp"

#include <cmath>
#include <stdexcept>

namespace hlsys {

RadialFunction bubble_profile(const ExponentConfig& cfg, const BubbleParams& params,
                              std::shared_ptr<const RadialGrid> grid) {
    if (!is_conformal(cfg))
        throw std::invalid_argument("bubble_profile: requires the conformal case p = q = (n+alpha)/(n-alpha)");
    if (!(params.lambda > 0) || !(params.c > 0))
        throw std::invalid_argument("bubble_profile: lambda and c must be positive");
    const double e = 0.5 * (cfg.n - cfg.alpha);
    const double lam2 = params.lambda * params.lambda;
    RadialFunction u = make_function(std::move(grid), [&](double r) {
        return params.c * std::pow(params.lambda / (lam2 + r * r), e);
    });
    u.tail.gamma = cfg.n - cfg.alpha;
    u.tail.A = params.c * std::pow(params.lambda, e);
    return u;
}

BubbleReport verify_bubble(const ExponentConfig& cfg, const RieszKernelTable& table,
                           const BubbleParams& params) {
    const auto& grid = table.grid();
    RadialFunction u = bubble_profile(cfg, params, grid);
    RadialFunction up = pow_profile(u, cfg.p);
    RadialFunction g = apply_riesz(table, up);

    BubbleReport report;
    double lo = HUGE_VAL, hi = -HUGE_VAL, sum = 0;
    for (std::size_t i = 0; i < grid->nodes.size(); ++i) {
        const double r = grid->nodes[i];
        if (r > 0.5 * grid->r_max) break;
        const double rho = g.values[i] / u.values[i];
        report.radii.push_back(r);
        report.ratio.push_back(rho);
        lo = std::min(lo, rho);
        hi = std::max(hi, rho);
        sum += rho;
    }
    report.ratio_mean = sum / double(report.ratio.size());
    report.ratio_spread = (hi - lo) / report.ratio_mean;
    return report;
}

namespace {

// power-law profile s^{-mu} with the origin node clipped to the first
// positive node value
RadialFunction power_profile(std::shared_ptr<const RadialGrid> grid, double mu) {
    RadialFunction f;
    f.grid = std::move(grid);
    const auto& nodes = f.grid->nodes;
    f.values.resize(nodes.size());
    for (std::size_t i = 1; i < nodes.size(); ++i)
        f.values[i] = std::pow(nodes[i], -mu);
    f.values[0] = f.values[1];
    f.clipped_origin = true;
    f.tail.A = 1.0;
    f.tail.gamma = mu;
    return f;
}

struct RatioScan {
    double mean = 0, flat = 0;
    std::vector<double> radii, ratio;
};

// ratio I(s^{-mu_src})(r) / r^{-mu_dst} over the annulus
RatioScan ratio_constant(const RieszKernelTable& table, double mu_src, double mu_dst,
                         double lo, double hi) {
    RadialFunction f = power_profile(table.grid(), mu_src);
    RadialFunction g = apply_riesz(table, f);
    RatioScan scan;
    double mn = HUGE_VAL, mx = -HUGE_VAL;
    const auto& nodes = table.grid()->nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double r = nodes[i];
        if (r < lo || r > hi) continue;
        const double rho = g.values[i] * std::pow(r, mu_dst);
        scan.radii.push_back(r);
        scan.ratio.push_back(rho);
        scan.mean += rho;
        mn = std::min(mn, rho);
        mx = std::max(mx, rho);
    }
    scan.mean /= double(scan.ratio.size());
    scan.flat = (mx - mn) / scan.mean;
    return scan;
}

} // namespace

SingularReport singular_pair(const ExponentConfig& cfg, const RieszKernelTable& table) {
    const double R = table.grid()->r_max;
    SingularReport report;
    report.annulus_lo = R / 20.0;
    report.annulus_hi = R / 4.0;
    report.pair.exp_u = cfg.n / (cfg.p + 1.0);
    report.pair.exp_v = cfg.n / (cfg.q + 1.0);

    const RatioScan su = ratio_constant(table, cfg.n * cfg.p / (cfg.p + 1.0),
                                        report.pair.exp_v, report.annulus_lo,
                                        report.annulus_hi);
    const RatioScan sv = ratio_constant(table, cfg.n * cfg.q / (cfg.q + 1.0),
                                        report.pair.exp_u, report.annulus_lo,
                                        report.annulus_hi);
    report.gamma_u = su.mean;
    report.gamma_v = sv.mean;
    report.flat_u = su.flat;
    report.flat_v = sv.flat;
    report.radii = su.radii;
    report.ratio_u = su.ratio;
    report.ratio_v = sv.ratio;
    if (report.flat_u > 1e-2 || report.flat_v > 1e-2)
        throw std::runtime_error("singular_pair: measured ratio is not constant over the annulus "
                                 "(discretization failure)");

    // c_v = gamma_u c_u^p and c_u = gamma_v c_v^q  =>  c_u = (gamma_v gamma_u^q)^{1/(1-pq)}
    report.pair.c_u = std::pow(report.gamma_v * std::pow(report.gamma_u, cfg.q),
                               1.0 / (1.0 - cfg.p * cfg.q));
    report.pair.c_v = report.gamma_u * std::pow(report.pair.c_u, cfg.p);

    // residual of the solved pair on the annulus: u-equation needs
    // c_u = c_v^q gamma_v(r), v-equation c_v = c_u^p gamma_u(r)
    double worst = 0;
    const double cvq = std::pow(report.pair.c_v, cfg.q);
    const double cup = std::pow(report.pair.c_u, cfg.p);
    for (std::size_t k = 0; k < su.radii.size(); ++k) {
        worst = std::max(worst, std::fabs(report.pair.c_u - cvq * sv.ratio[k]) / report.pair.c_u);
        worst = std::max(worst, std::fabs(report.pair.c_v - cup * su.ratio[k]) / report.pair.c_v);
    }
    report.residual = worst;
    return report;
}

std::pair<RadialFunction, RadialFunction>
singular_profiles(std::shared_ptr<const RadialGrid> grid, const SingularPair& pair) {
    RadialFunction u = power_profile(grid, pair.exp_u);
    RadialFunction v = power_profile(std::move(grid), pair.exp_v);
    for (auto& x : u.values) x *= pair.c_u;
    for (auto& x : v.values) x *= pair.c_v;
    u.tail.A = pair.c_u;
    v.tail.A = pair.c_v;
    return {std::move(u), std::move(v)};
}

ScaledPair scale_transform(const RadialFunction& u, const RadialFunction& v,
                           const ExponentConfig& cfg, double lambda) {
    if (!(lambda > 0)) throw std::invalid_argument("scale_transform: lambda must be positive");
    const auto& src = *u.grid;
    auto grid = make_grid(src.r_max / lambda, int(src.intervals()), src.grading);

    // node i of the scaled grid sits at r_i / lambda, so the transformed
    // values are exactly a scalar multiple of the originals
    auto transport = [&](const RadialFunction& f, double weight_exp) {
        RadialFunction out;
        out.grid = grid;
        const double scale = std::pow(lambda, weight_exp);
        out.values.resize(f.values.size());
        for (std::size_t i = 0; i < f.values.size(); ++i)
            out.values[i] = scale * f.values[i];
        out.clipped_origin = f.clipped_origin;
        if (f.tail.present()) {
            out.tail.gamma = f.tail.gamma;
            out.tail.A = std::pow(lambda, weight_exp - f.tail.gamma) * f.tail.A;
        }
        return out;
    };
    ScaledPair out;
    out.u = transport(u, cfg.n / (cfg.p + 1.0));
    out.v = transport(v, cfg.n / (cfg.q + 1.0));
    return out;
}

RadialFunction resample_to(const RadialFunction& f,
                           std::shared_ptr<const RadialGrid> grid, bool* used_tail) {
    RadialFunction out;
    out.grid = std::move(grid);
    out.values.resize(out.grid->nodes.size());
    bool beyond = false;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double r = out.grid->nodes[i];
        if (r > f.grid->r_max) {
            beyond = true;
            if (!f.tail.present())
                throw std::runtime_error("resample_to: target extends beyond the data and no tail model is attached");
        }
        out.values[i] = f(r);
    }
    out.tail = f.tail;
    out.clipped_origin = f.clipped_origin;
    if (used_tail) *used_tail = beyond;
    return out;
}

} // namespace hlsys
