#include "hlsys/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hlsys {

namespace {

double norm_gauge(const ExponentConfig& cfg, const RadialFunction& u, Normalization kind) {
    if (kind == Normalization::ValueAtZero) return u.values.front();
    return lp_norm(cfg.n, u, cfg.p + 1.0, u.grid->r_max);
}

void scale_values(RadialFunction& f, double s) {
    for (auto& v : f.values) v *= s;
    if (f.tail.present()) f.tail.A *= s;
}

void refit_tail_or_compact(RadialFunction& f) {
    try {
        fit_tail(f);
    } catch (const std::exception&) {
        f.tail = TailModel{};
    }
}

RadialFunction abs_profile(const RadialFunction& f) {
    RadialFunction out = f;
    for (auto& v : out.values) v = std::fabs(v);
    out.tail = TailModel{};
    return out;
}

} // namespace

PicardResult picard_solve(const ExponentConfig& cfg, const RieszKernelTable& table,
                          const RadialFunction& u0, const SolverSettings& settings) {
    if (!u0.nonnegative())
        throw std::invalid_argument("picard_solve: initial profile must be nonnegative and finite");
    if (u0.max_abs() == 0.0)
        throw std::invalid_argument("picard_solve: initial profile vanishes identically");
    if (!(settings.tol > 0) || !(settings.damping > 0) || !(settings.damping <= 1))
        throw std::invalid_argument("picard_solve: need tol > 0 and damping in (0, 1]");

    SolverReport report;
    double damping = settings.damping;

    RadialFunction u = u0;
    {
        const double gauge = norm_gauge(cfg, u, settings.normalization);
        if (!(gauge > 0))
            throw std::invalid_argument("picard_solve: normalization gauge of u0 is not positive");
        scale_values(u, 1.0 / gauge);
    }

    RadialFunction v = u;  // placeholder until the first iteration
    double theta = 1.0;
    int non_monotone = 0;
    double prev_change = HUGE_VAL;

    int k = 0;
    for (; k < settings.max_iters; ++k) {
        v = apply_riesz(table, pow_profile(u, cfg.p));
        RadialFunction w = apply_riesz(table, pow_profile(v, cfg.q));
        theta = norm_gauge(cfg, w, settings.normalization);
        if (!(theta > 0) || !std::isfinite(theta))
            throw std::runtime_error("picard_solve: iteration produced a degenerate profile");
        RadialFunction next = u;
        const double umax = u.max_abs();
        double change = 0;
        for (std::size_t i = 0; i < next.values.size(); ++i) {
            const double target = w.values[i] / theta;
            change = std::max(change, std::fabs(target - u.values[i]));
            next.values[i] = (1.0 - damping) * u.values[i] + damping * target;
        }
        change /= umax;
        refit_tail_or_compact(next);

        report.change_history.push_back(change);
        report.gamma_u_history.push_back(next.tail.present() ? next.tail.gamma : 0.0);
        report.gamma_v_history.push_back(v.tail.present() ? v.tail.gamma : 0.0);

        // oscillation guard: halve the damping once if the step size grows
        // five times in a row
        if (change > prev_change) {
            if (++non_monotone >= 5 && !report.damping_halved) {
                damping *= 0.5;
                report.damping_halved = true;
                non_monotone = 0;
            }
        } else {
            non_monotone = 0;
        }
        prev_change = change;
        u = std::move(next);
        if (change < settings.tol) {
            report.converged = true;
            ++k;
            break;
        }
    }
    report.iterations = k;
    report.damping_final = damping;

    // remove the normalization gauge: at a fixed point of the normalized
    // map, I((I(u^p))^q) = theta * u, and A = theta^{-1/(pq-1)} turns the
    // shape into an actual solution pair (A u, A^p I(u^p)).
    v = apply_riesz(table, pow_profile(u, cfg.p));
    RadialFunction w = apply_riesz(table, pow_profile(v, cfg.q));
    theta = norm_gauge(cfg, w, settings.normalization) /
            norm_gauge(cfg, u, settings.normalization);
    const double amplitude = std::pow(theta, -1.0 / (cfg.p * cfg.q - 1.0));
    scale_values(u, amplitude);
    scale_values(v, std::pow(amplitude, cfg.p));
    report.amplitude = amplitude;

    report.residual = system_residual(cfg, table, u, v);
    report.decay = decay_check(u, v);

    PicardResult out;
    out.u = std::move(u);
    out.v = std::move(v);
    out.report = report;
    return out;
}

ResidualReport system_residual(const ExponentConfig& cfg, const RieszKernelTable& table,
                               const RadialFunction& u, const RadialFunction& v) {
    if (u.grid->hash() != table.grid()->hash() || v.grid->hash() != table.grid()->hash())
        throw std::invalid_argument("system_residual: profiles and table live on different grids");
    const RadialFunction iu = apply_riesz(table, pow_profile(u, cfg.p));
    const RadialFunction iv = apply_riesz(table, pow_profile(v, cfg.q));
    const double window = 0.25 * table.grid()->r_max;

    RadialFunction eu = u, ev = v;
    double sup_eu = 0, sup_ev = 0, sup_u = 0, sup_v = 0;
    const auto& nodes = table.grid()->nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        eu.values[i] = u.values[i] - iv.values[i];
        ev.values[i] = v.values[i] - iu.values[i];
        if (nodes[i] <= window) {
            sup_eu = std::max(sup_eu, std::fabs(eu.values[i]));
            sup_ev = std::max(sup_ev, std::fabs(ev.values[i]));
            sup_u = std::max(sup_u, std::fabs(u.values[i]));
            sup_v = std::max(sup_v, std::fabs(v.values[i]));
        }
    }
    eu.tail = TailModel{};
    ev.tail = TailModel{};

    ResidualReport rep;
    rep.sup_u = sup_u > 0 ? sup_eu / sup_u : HUGE_VAL;
    rep.sup_v = sup_v > 0 ? sup_ev / sup_v : HUGE_VAL;
    rep.lp_u = lp_norm(cfg.n, abs_profile(eu), cfg.p + 1.0, window) /
               lp_norm(cfg.n, abs_profile(u), cfg.p + 1.0, window);
    rep.lq_v = lp_norm(cfg.n, abs_profile(ev), cfg.q + 1.0, window) /
               lp_norm(cfg.n, abs_profile(v), cfg.q + 1.0, window);
    return rep;
}

DecayReport decay_check(const RadialFunction& u, const RadialFunction& v) {
    DecayReport rep;
    auto probe = [](const RadialFunction& f, double& gamma, double& drop) {
        RadialFunction work = f;
        try {
            TailFit fit = fit_tail(work);
            gamma = fit.tail.gamma;
        } catch (const std::exception&) {
            gamma = 0;
        }
        const double head = std::fabs(f.values.front());
        drop = head > 0 ? std::fabs(f.values.back()) / head : HUGE_VAL;
    };
    probe(u, rep.gamma_u, rep.drop_u);
    probe(v, rep.gamma_v, rep.drop_v);
    rep.decays = rep.gamma_u > 0 && rep.gamma_v > 0 && rep.drop_u <= 0.01 && rep.drop_v <= 0.01;
    return rep;
}

// ---------------------------------------------------------------------------
// contraction probe
// ---------------------------------------------------------------------------

ProbeParams probe_params_from(const ExponentConfig& cfg, double R) {
    ProbeParams params;
    params.dim = cfg.n;
    params.alpha = cfg.alpha;
    params.beta = cfg.alpha;
    params.r = choose_r(cfg);
    const double P = std::max(cfg.p, cfg.q);
    const double Q = std::min(cfg.p, cfg.q);
    params.a = (P + 1.0) / (P - params.r);
    params.b = (Q + 1.0) / (Q - 1.0 / params.r);
    params.R = R;
    params.p = P + 1.0;
    return params;
}

namespace {
const ProbeParams& check_probe_params(const ProbeParams& params) {
    const double lhs = 1.0 / (params.r * params.a) + 1.0 / params.b;
    const double rhs = params.alpha / (params.r * params.dim) + params.beta / params.dim;
    if (std::fabs(lhs - rhs) > 1e-10)
        throw std::invalid_argument("ContractionProbe: 1/(ra) + 1/b = alpha/(rn) + beta/n violated");
    if (!(params.r >= 1.0))
        throw std::invalid_argument("ContractionProbe: need r >= 1");
    if (!(params.a > 1.0) || !(params.b > 1.0))
        throw std::invalid_argument("ContractionProbe: need a, b > 1");
    return params;
}
} // namespace

ContractionProbe::ContractionProbe(const ProbeParams& params,
                                   std::shared_ptr<const RadialGrid> grid)
    : params_(check_probe_params(params)),
      grid_(std::move(grid)),
      inner_(RieszKernelTable::build(params.dim, params.alpha, grid_)),
      outer_(RieszKernelTable::build(params.dim, params.beta, grid_)) {
    if (std::fabs(grid_->r_max - params.R) > 1e-12 * params.R)
        throw std::invalid_argument("ContractionProbe: grid radius must equal R");

    eta_.resize(grid_->nodes.size());
    const double R2 = 0.5 * params.R;
    for (std::size_t i = 0; i < eta_.size(); ++i) {
        const double r = grid_->nodes[i];
        if (r <= R2) {
            eta_[i] = 1.0;
        } else {
            const double t = std::min(1.0, (r - R2) / R2);
            eta_[i] = 1.0 - t * t * (3.0 - 2.0 * t);
        }
    }
}

RadialFunction ContractionProbe::apply(const RadialFunction& U, const RadialFunction& V,
                                       const RadialFunction& phi) const {
    const std::size_t n = grid_->nodes.size();
    std::vector<double> inner_src(n), mid(n);
    for (std::size_t i = 0; i < n; ++i)
        inner_src[i] = U.values[i] * std::pow(std::fabs(phi.values[i]), params_.r);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = inner_.row(i);
        double acc = 0;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * inner_src[j];
        mid[i] = V.values[i] * std::pow(acc, 1.0 / params_.r);
    }
    RadialFunction out = zero_function(grid_);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = outer_.row(i);
        double acc = 0;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * mid[j];
        out.values[i] = eta_[i] * acc;
    }
    return out;
}

ProbeReport ContractionProbe::compare(const RadialFunction& U, const RadialFunction& V,
                                      const RadialFunction& phi,
                                      const RadialFunction& psi) const {
    const RadialFunction t_phi = apply(U, V, phi);
    const RadialFunction t_psi = apply(U, V, psi);
    RadialFunction diff = zero_function(grid_);
    for (std::size_t i = 0; i < diff.values.size(); ++i)
        diff.values[i] = std::fabs(phi.values[i] - psi.values[i]);
    const RadialFunction t_diff = apply(U, V, diff);

    ProbeReport rep;
    rep.domination_margin = HUGE_VAL;
    RadialFunction tdelta = zero_function(grid_);
    for (std::size_t i = 0; i < diff.values.size(); ++i) {
        tdelta.values[i] = std::fabs(t_phi.values[i] - t_psi.values[i]);
        rep.domination_margin =
            std::min(rep.domination_margin, t_diff.values[i] - tdelta.values[i]);
    }
    const double denom = lp_norm(params_.dim, diff, params_.p, params_.R);
    rep.lipschitz_ratio =
        denom > 0 ? lp_norm(params_.dim, tdelta, params_.p, params_.R) / denom : 0.0;
    return rep;
}

} // namespace hlsys
