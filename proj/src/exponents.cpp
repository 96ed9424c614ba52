#include "hlsys/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hlsys {

namespace {
constexpr double kIdentityTol = 1e-12;

void fill_duals(ExponentConfig& cfg) {
    cfg.p0 = (cfg.p + 1.0) / cfg.p;
    cfg.q0 = (cfg.q + 1.0) / cfg.q;
}
} // namespace

void validate_config(const ExponentConfig& cfg) {
    if (cfg.n < 2)
        throw std::domain_error("ExponentConfig: dimension must be >= 2, got " + std::to_string(cfg.n));
    if (!(cfg.alpha > 0.0) || !(cfg.alpha < cfg.n))
        throw std::domain_error("ExponentConfig: alpha must lie in (0, n), got " + std::to_string(cfg.alpha));
    const double floor = cfg.exponent_floor();
    if (!(cfg.p > floor) || !std::isfinite(cfg.p))
        throw std::invalid_argument("ExponentConfig: p must lie in (alpha/(n-alpha), inf), got " + std::to_string(cfg.p));
    if (!(cfg.q > floor) || !std::isfinite(cfg.q))
        throw std::invalid_argument("ExponentConfig: no admissible q (got " + std::to_string(cfg.q) + ")");
    const double critical = 1.0 / (cfg.p + 1.0) + 1.0 / (cfg.q + 1.0) + cfg.alpha / cfg.n - 1.0;
    if (std::fabs(critical) > kIdentityTol)
        throw std::invalid_argument("ExponentConfig: critical relation violated by " + std::to_string(critical));
    if (std::fabs(cfg.p0 - (cfg.p + 1.0) / cfg.p) > kIdentityTol ||
        std::fabs(cfg.q0 - (cfg.q + 1.0) / cfg.q) > kIdentityTol)
        throw std::invalid_argument("ExponentConfig: dual exponents inconsistent with (p, q)");
    const double product = cfg.p * cfg.q - 1.0 -
                           (cfg.alpha / cfg.n) * (cfg.p + 1.0) * (cfg.q + 1.0);
    // scale-aware: (p+1)(q+1) can be large for extreme configs
    const double scale = std::max(1.0, (cfg.p + 1.0) * (cfg.q + 1.0));
    if (std::fabs(product) > kIdentityTol * scale)
        throw std::invalid_argument("ExponentConfig: product identity violated by " + std::to_string(product));
}

ExponentConfig make_config(int n, double alpha, double p) {
    if (n < 2)
        throw std::domain_error("make_config: dimension must be >= 2");
    if (!(alpha > 0.0) || !(alpha < n))
        throw std::domain_error("make_config: alpha must lie in (0, n)");
    const double floor = alpha / (n - alpha);
    if (!(p > floor))
        throw std::invalid_argument("make_config: p must exceed alpha/(n-alpha) = " + std::to_string(floor));

    const double denom = 1.0 - alpha / n - 1.0 / (p + 1.0);
    if (!(denom > 0.0))
        throw std::invalid_argument("make_config: no admissible q for this (n, alpha, p)");
    ExponentConfig cfg;
    cfg.n = n;
    cfg.alpha = alpha;
    cfg.p = p;
    cfg.q = 1.0 / denom - 1.0;
    if (!(cfg.q > floor))
        throw std::invalid_argument("make_config: resulting q <= alpha/(n-alpha)");
    fill_duals(cfg);
    validate_config(cfg);
    return cfg;
}

ExponentConfig make_config_from_p0(int n, double alpha, double p0) {
    if (n < 2)
        throw std::domain_error("make_config_from_p0: dimension must be >= 2");
    if (!(alpha > 0.0) || !(alpha < n))
        throw std::domain_error("make_config_from_p0: alpha must lie in (0, n)");
    // 1/p0 + 1/q0 = 1 + alpha/n with 1 < p0, q0 < n/alpha
    if (!(p0 > 1.0) || !(p0 < double(n) / alpha))
        throw std::invalid_argument("make_config_from_p0: p0 must lie in (1, n/alpha)");
    const double inv_q0 = 1.0 + alpha / n - 1.0 / p0;
    if (!(inv_q0 > alpha / n) || !(inv_q0 < 1.0))
        throw std::invalid_argument("make_config_from_p0: no admissible q0 for this p0");
    return make_config(n, alpha, 1.0 / (p0 - 1.0));
}

bool is_conformal(const ExponentConfig& cfg, double tol) {
    const double pc = cfg.conformal_exponent();
    return std::fabs(cfg.p - pc) <= tol * pc && std::fabs(cfg.q - pc) <= tol * pc;
}

ExponentConfig swapped(const ExponentConfig& cfg) {
    ExponentConfig out = cfg;
    std::swap(out.p, out.q);
    std::swap(out.p0, out.q0);
    validate_config(out);
    return out;
}

double choose_r(const ExponentConfig& cfg) {
    validate_config(cfg);
    // convention: the larger exponent plays the role of p
    const double P = std::max(cfg.p, cfg.q);
    const double Q = std::min(cfg.p, cfg.q);
    const double r = P - (cfg.alpha / cfg.n) * (P + 1.0);
    if (r < 1.0 - 1e-12)
        throw std::logic_error("choose_r: r < 1, config is not admissible");
    if (Q * r < 1.0 - 1e-12)
        throw std::logic_error("choose_r: q*r < 1, config is not admissible");
    return r;
}

double IdentityAudit::max_abs() const {
    return std::max({critical_relation, product_identity, r_identity,
                     singular_exponent_u, singular_exponent_v});
}

IdentityAudit identity_audit(const ExponentConfig& cfg) {
    IdentityAudit a;
    const double an = cfg.alpha / cfg.n;
    a.critical_relation =
        std::fabs(1.0 / (cfg.p + 1.0) + 1.0 / (cfg.q + 1.0) + an - 1.0);
    a.product_identity =
        std::fabs(cfg.p * cfg.q - 1.0 - an * (cfg.p + 1.0) * (cfg.q + 1.0));
    const double P = std::max(cfg.p, cfg.q);
    const double Q = std::min(cfg.p, cfg.q);
    const double r = P - an * (P + 1.0);
    a.r_identity = std::fabs(r * Q - 1.0 - an * (P + 1.0));
    a.singular_exponent_u =
        std::fabs(cfg.n * cfg.p / (cfg.p + 1.0) - cfg.alpha - cfg.n / (cfg.q + 1.0));
    a.singular_exponent_v =
        std::fabs(cfg.n * cfg.q / (cfg.q + 1.0) - cfg.alpha - cfg.n / (cfg.p + 1.0));
    return a;
}

} // namespace hlsys
