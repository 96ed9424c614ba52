// Test-side reference integrators, independent of the library's quadrature.
#pragma once

#include <cmath>
#include <functional>
#include <memory>

#include "hlsys/radial.hpp"
#include "hlsys/riesz.hpp"

namespace oracles {

// adaptive Simpson with interval bisection
inline double simpson(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}

inline double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                           double whole, double tol, int depth) {
    const double c = 0.5 * (a + b);
    const double left = simpson(f, a, c), right = simpson(f, c, b);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_rec(f, a, c, left, 0.5 * tol, depth - 1) +
           adaptive_rec(f, c, b, right, 0.5 * tol, depth - 1);
}

inline double adaptive(const std::function<double(double)>& f, double a, double b,
                       double tol = 1e-11, int depth = 48) {
    return adaptive_rec(f, a, b, simpson(f, a, b), tol, depth);
}

// angular kernel reference: sigma_{n-2} Int_0^pi sin^{n-2} (d2)^{-(n-a)/2},
// split at the near-singular end for stability
inline double angular_kernel(int dim, double alpha, double r, double s) {
    const double nu = 0.5 * (dim - alpha);
    auto f = [=](double theta) {
        const double sh = std::sin(0.5 * theta);
        const double d2 = (r - s) * (r - s) + 4.0 * r * s * sh * sh;
        double w = std::pow(d2, -nu);
        for (int k = 0; k < dim - 2; ++k) w *= std::sin(theta);
        return w;
    };
    const double split = 1e-3;
    double acc = adaptive(f, split, M_PI);
    double hi = split;
    for (int k = 0; k < 40; ++k) {
        acc += adaptive(f, 0.5 * hi, hi);
        hi *= 0.5;
    }
    acc += simpson(f, 0.0, hi);
    return hlsys::sphere_area(dim - 1) * acc;
}

// 1-D radial potential by adaptive quadrature of the closed-form kernel
// against an explicit profile (independent of the table machinery)
inline double radial_potential(int dim, double alpha, const std::function<double(double)>& f,
                               double r, double s_max) {
    auto g = [=](double s) {
        return hlsys::riesz_kernel(dim, alpha, r, s) * std::pow(s, dim - 1) * f(s);
    };
    // split at the diagonal where the kernel has a kink/singularity
    double acc = 0;
    if (r > 0 && r < s_max) {
        const double eps = 1e-6 * std::max(1.0, r);
        acc += adaptive(g, 0.0, std::max(0.0, r - eps), 1e-10);
        acc += adaptive(g, std::min(s_max, r + eps), s_max, 1e-10);
        // graded panels into the kink from both sides
        double left = std::max(0.0, r - eps), right = std::min(s_max, r + eps);
        double width = r - left;
        for (int k = 0; k < 30 && width > 1e-300; ++k) {
            acc += simpson(g, r - width, r - 0.5 * width);
            width *= 0.5;
        }
        width = right - r;
        for (int k = 0; k < 30 && width > 1e-300; ++k) {
            acc += simpson(g, r + 0.5 * width, r + width);
            width *= 0.5;
        }
    } else {
        acc = adaptive(g, 0.0, s_max, 1e-10);
    }
    return acc;
}

} // namespace oracles
