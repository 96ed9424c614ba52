#pragma once

#include <vector>

namespace hlsys {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1], cached per point count.
const QuadRule& gauss_legendre(int points);

/// Gauss rule on [-1, 1] for the Gegenbauer weight (1 - t^2)^mu, mu > -1,
/// computed by Newton iteration on the monic three-term recurrence.
/// mu = 0 reduces to Gauss-Legendre, mu = -1/2 to Gauss-Chebyshev.
QuadRule gauss_gegenbauer(int points, double mu);

/// Apply a [-1,1] rule to an interval [a, b].
template <class F>
double integrate(const QuadRule& rule, double a, double b, F&& f) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        acc += rule.weights[k] * f(mid + half * rule.nodes[k]);
    return acc * half;
}

} // namespace hlsys
