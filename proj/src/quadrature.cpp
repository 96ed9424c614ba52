#include "hlsys/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace hlsys {

namespace {

// Newton iteration on the Legendre recurrence; standard construction.
QuadRule build_legendre(int n) {
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

// Monic recurrence coefficients for the weight (1-t^2)^mu:
//   p_{k+1} = t p_k - beta_k p_{k-1},  beta_1 = 1/(3+2mu),
//   beta_k = k(k+2mu) / ((2k+2mu+1)(2k+2mu-1))  for k >= 2.
double gegenbauer_beta(int k, double mu) {
    if (k == 1) return 1.0 / (3.0 + 2.0 * mu);
    return k * (k + 2.0 * mu) /
           ((2.0 * k + 2.0 * mu + 1.0) * (2.0 * k + 2.0 * mu - 1.0));
}

// Evaluate the orthonormal polynomials phi_0..phi_{n} at t and return
// phi_n, phi_n' and sum_{j<n} phi_j(t)^2 (needed for Gauss weights).
struct OrthoEval {
    double pn, dpn, kernel_sum;
};

OrthoEval eval_orthonormal(int n, double mu, double mu0, double t) {
    double phi_prev = 0, dphi_prev = 0;
    double phi = 1.0 / std::sqrt(mu0), dphi = 0;
    double ksum = 0;
    for (int k = 0; k < n; ++k) {
        ksum += phi * phi;
        const double bk1 = std::sqrt(gegenbauer_beta(k + 1, mu));
        const double bk = k > 0 ? std::sqrt(gegenbauer_beta(k, mu)) : 0.0;
        const double phi_next = (t * phi - bk * phi_prev) / bk1;
        const double dphi_next = (phi + t * dphi - bk * dphi_prev) / bk1;
        phi_prev = phi;
        dphi_prev = dphi;
        phi = phi_next;
        dphi = dphi_next;
    }
    return {phi, dphi, ksum};
}

} // namespace

const QuadRule& gauss_legendre(int points) {
    static std::map<int, QuadRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(points);
    if (it == cache.end()) it = cache.emplace(points, build_legendre(points)).first;
    return it->second;
}

QuadRule gauss_gegenbauer(int points, double mu) {
    if (points < 1) throw std::invalid_argument("gauss_gegenbauer: points >= 1");
    if (!(mu > -1.0)) throw std::invalid_argument("gauss_gegenbauer: need mu > -1");
    // mu0 = Int_{-1}^{1} (1-t^2)^mu dt = sqrt(pi) Gamma(mu+1) / Gamma(mu+3/2)
    const double mu0 = std::sqrt(M_PI) * std::exp(std::lgamma(mu + 1.0) - std::lgamma(mu + 1.5));

    QuadRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    for (int i = 0; i < (points + 1) / 2; ++i) {
        // Chebyshev-angle initial guess; adequate for symmetric weights.
        double t = std::cos(M_PI * (i + 0.5) / points);
        OrthoEval e{};
        for (int it = 0; it < 200; ++it) {
            e = eval_orthonormal(points, mu, mu0, t);
            const double dt = e.pn / e.dpn;
            t -= dt;
            if (std::fabs(dt) < 1e-15) break;
        }
        e = eval_orthonormal(points, mu, mu0, t);
        const double w = 1.0 / e.kernel_sum;
        rule.nodes[i] = t;
        rule.weights[i] = w;
        rule.nodes[points - 1 - i] = -t;
        rule.weights[points - 1 - i] = w;
    }
    if (points % 2 == 1) rule.nodes[points / 2] = 0.0;
    return rule;
}

} // namespace hlsys
