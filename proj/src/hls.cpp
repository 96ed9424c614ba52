#include "hlsys/hls.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hlsys/quadrature.hpp"

namespace hlsys {

namespace {

// compensated sum; the ascent monotonicity checks sit at the 1e-12 level,
// so plain left-to-right accumulation over thousands of terms is too sloppy
double kahan_sum(const std::vector<double>& terms) {
    double sum = 0, carry = 0;
    for (double t : terms) {
        const double y = t - carry;
        const double s = sum + y;
        carry = (s - sum) - y;
        sum = s;
    }
    return sum;
}

// quadrature weights w_i = sigma_{n-1} Int phi_i(r) r^{n-1} dr for the hat
// basis; with these, sum_i w_i f_i is the volume integral of the interpolant
std::vector<double> volume_weights(int dim, const RadialGrid& grid) {
    const QuadRule& gl = gauss_legendre(8);
    std::vector<double> w(grid.nodes.size(), 0.0);
    const double sigma = sphere_area(dim);
    for (std::size_t j = 0; j + 1 < grid.nodes.size(); ++j) {
        const double a = grid.nodes[j], b = grid.nodes[j + 1];
        const double width = b - a;
        double left = 0, right = 0;
        const double mid = 0.5 * (a + b), half = 0.5 * width;
        for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
            const double s = mid + half * gl.nodes[k];
            const double lam = (s - a) / width;
            const double base = half * gl.weights[k] * std::pow(s, dim - 1);
            left += base * (1.0 - lam);
            right += base * lam;
        }
        w[j] += sigma * left;
        w[j + 1] += sigma * right;
    }
    return w;
}

struct AscentWorkspace {
    const ExponentConfig& cfg;
    const RieszKernelTable& table;
    std::vector<double> w;  // volume weights

    explicit AscentWorkspace(const ExponentConfig& c, const RieszKernelTable& t)
        : cfg(c), table(t), w(volume_weights(c.n, *t.grid())) {}

    std::size_t size() const { return w.size(); }

    // symmetrized potential h = (K f + W^{-1} K^T W f) / 2; using it for the
    // Holder updates makes the discrete J exactly symmetric in (f, g)
    std::vector<double> potential(const std::vector<double>& f) const {
        const std::size_t n = size();
        std::vector<double> h(n, 0.0), adj(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = table.row(i);
            double acc = 0;
            for (std::size_t j = 0; j < n; ++j) acc += row[j] * f[j];
            h[i] = acc;
            const double wf = w[i] * f[i];
            if (wf != 0.0)
                for (std::size_t j = 0; j < n; ++j) adj[j] += row[j] * wf;
        }
        for (std::size_t i = 0; i < n; ++i) h[i] = 0.5 * (h[i] + adj[i] / w[i]);
        return h;
    }

    double norm(const std::vector<double>& f, double exponent) const {
        std::vector<double> terms(size());
        for (std::size_t i = 0; i < size(); ++i)
            terms[i] = w[i] * std::pow(std::fabs(f[i]), exponent);
        return std::pow(kahan_sum(terms), 1.0 / exponent);
    }

    double pair_j(const std::vector<double>& f, const std::vector<double>& h) const {
        std::vector<double> terms(size());
        for (std::size_t i = 0; i < size(); ++i) terms[i] = w[i] * f[i] * h[i];
        return kahan_sum(terms);
    }
};

} // namespace

double hls_functional(const ExponentConfig& cfg, const RieszKernelTable& table,
                      const RadialFunction& f, const RadialFunction& g) {
    if (f.grid->hash() != table.grid()->hash() || g.grid->hash() != table.grid()->hash())
        throw std::invalid_argument("hls_functional: profiles and table live on different grids");

    const RadialFunction potential_g = apply_riesz(table, g);
    const RadialFunction potential_f = apply_riesz(table, f);

    const std::vector<double> w = volume_weights(cfg.n, *table.grid());
    std::vector<double> terms(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        terms[i] = 0.5 * w[i] *
                   (f.values[i] * potential_g.values[i] + g.values[i] * potential_f.values[i]);
    double j = kahan_sum(terms);

    // tail-tail block: both factors power laws beyond r_max
    const double R = table.grid()->r_max;
    auto tail_block = [&](const TailModel& tf, const TailModel& tg_pot) {
        if (!tf.present() || !tg_pot.present()) return 0.0;
        const double gsum = tf.gamma + tg_pot.gamma;
        if (!(gsum > cfg.n))
            throw std::runtime_error("hls_functional: tail exponents too weak, functional diverges");
        return sphere_area(cfg.n) * tf.A * tg_pot.A * std::pow(R, cfg.n - gsum) /
               (gsum - cfg.n);
    };
    j += 0.5 * (tail_block(f.tail, potential_g.tail) + tail_block(g.tail, potential_f.tail));
    return j;
}

AscentReport alternating_ascent(const ExponentConfig& cfg, const RieszKernelTable& table,
                                const RadialFunction& f0, const AscentSettings& settings) {
    if (!f0.nonnegative() || f0.max_abs() == 0.0)
        throw std::invalid_argument("alternating_ascent: start must be nonnegative and nonzero");
    AscentWorkspace ws(cfg, table);
    const double p0 = cfg.p0, q0 = cfg.q0;
    const double p0c = p0 / (p0 - 1.0), q0c = q0 / (q0 - 1.0);  // conjugates

    std::vector<double> f = f0.values;
    {
        const double nf = ws.norm(f, p0);
        for (auto& x : f) x /= nf;
    }
    std::vector<double> g(f.size(), 0.0);

    AscentReport report;
    double prev_j = -HUGE_VAL;
    bool update_g = true;
    for (int step = 0; step < settings.max_half_steps; ++step) {
        double j;
        if (update_g) {
            const std::vector<double> h = ws.potential(f);
            for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::pow(h[i], q0c - 1.0);
            const double ng = ws.norm(g, q0);
            for (auto& x : g) x /= ng;
            j = ws.pair_j(g, h);
        } else {
            const std::vector<double> h = ws.potential(g);
            for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(h[i], p0c - 1.0);
            const double nf = ws.norm(f, p0);
            for (auto& x : f) x /= nf;
            j = ws.pair_j(f, h);
        }
        update_g = !update_g;
        report.j_history.push_back(j);
        report.half_steps = step + 1;
        if (step >= 1 && std::fabs(j - prev_j) < settings.tol * std::fabs(j)) {
            report.converged = true;
            break;
        }
        prev_j = j;
    }
    report.final_j = report.j_history.back();

    auto pack = [&](const std::vector<double>& vals) {
        RadialFunction out = zero_function(table.grid());
        out.values = vals;
        try {
            fit_tail(out);
        } catch (const std::exception&) {
            out.tail = TailModel{};
        }
        return out;
    };
    report.f = pack(f);
    report.g = pack(g);
    return report;
}

RadialFunction maximizer_profile(const ExponentConfig& cfg,
                                 std::shared_ptr<const RadialGrid> grid, double lambda) {
    const double e = cfg.n / cfg.p0;
    const double lam2 = lambda * lambda;
    RadialFunction f = make_function(std::move(grid), [&](double r) {
        return std::pow(lambda / (lam2 + r * r), e);
    });
    f.tail.gamma = 2.0 * e;
    f.tail.A = std::pow(lambda, e);
    return f;
}

std::pair<RadialFunction, RadialFunction>
maximizer_to_solution(const ExponentConfig& cfg, const RadialFunction& f,
                      const RadialFunction& g) {
    return {pow_profile(f, cfg.p0 - 1.0), pow_profile(g, cfg.q0 - 1.0)};
}

RescaleReport solution_rescale(const ExponentConfig& cfg, const RieszKernelTable& table,
                               RadialFunction& u, RadialFunction& v) {
    const RadialFunction iu = apply_riesz(table, pow_profile(u, cfg.p));
    const RadialFunction iv = apply_riesz(table, pow_profile(v, cfg.q));
    const std::vector<double> w = volume_weights(cfg.n, *table.grid());
    const double window = 0.25 * table.grid()->r_max;
    const auto& nodes = table.grid()->nodes;

    double num_u = 0, den_u = 0, num_v = 0, den_v = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] > window) break;
        num_u += w[i] * iv.values[i] * u.values[i];
        den_u += w[i] * u.values[i] * u.values[i];
        num_v += w[i] * iu.values[i] * v.values[i];
        den_v += w[i] * v.values[i] * v.values[i];
    }
    RescaleReport rep;
    rep.theta_u = num_u / den_u;  // I(v^q) ~ theta_u u
    rep.theta_v = num_v / den_v;  // I(u^p) ~ theta_v v
    rep.mult_u = std::pow(rep.theta_u * std::pow(rep.theta_v, cfg.q),
                          1.0 / (1.0 - cfg.p * cfg.q));
    rep.mult_v = std::pow(rep.mult_u, cfg.p) * rep.theta_v;
    auto scale = [](RadialFunction& h, double s) {
        for (auto& x : h.values) x *= s;
        if (h.tail.present()) h.tail.A *= s;
    };
    scale(u, rep.mult_u);
    scale(v, rep.mult_v);
    return rep;
}

} // namespace hlsys
