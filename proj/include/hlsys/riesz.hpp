#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hlsys/exponents.hpp"
#include "hlsys/radial.hpp"

namespace hlsys {

/// Radial reduction of the kernel |x - y|^{alpha - n}: for |x| = r, |y| = s,
///
///   k(r, s) = sigma_{n-2} Int_0^pi sin^{n-2}(t) (r^2 - 2 r s cos t + s^2)^{-(n-alpha)/2} dt,
///
/// so that (I_alpha f)(r) = Int_0^inf k(r, s) f(s) s^{n-1} ds for radial f.
/// Closed forms are used for n = 3 (elementary) and (n, alpha) = (2, 1)
/// (complete elliptic integral); other parameters fall back to the angular
/// quadrature below.  k(r, r) is infinite for alpha <= 1, integrable in s.
double riesz_kernel(int dim, double alpha, double r, double s);

/// Angular integral by quadrature: Gauss-Gegenbauer in cos(t) for separated
/// arguments, geometrically graded Gauss-Legendre panels in the angle near
/// the diagonal where the integrand develops the |r-s| scale.
double riesz_kernel_angular(int dim, double alpha, double r, double s);

/// Product-integration matrix for I_alpha on a radial grid:
///   entries[i][j] = Int k(r_i, s) s^{n-1} phi_j(s) ds
/// with phi_j the piecewise-linear hat at node j, so applying the operator
/// to a profile is a matrix-vector product.  Cells crossing s = r_i are
/// integrated on a dyadically graded sub-mesh toward the singular point.
class RieszKernelTable {
public:
    static RieszKernelTable build(int dim, double alpha,
                                  std::shared_ptr<const RadialGrid> grid);

    int dim() const { return dim_; }
    double alpha() const { return alpha_; }
    const std::shared_ptr<const RadialGrid>& grid() const { return grid_; }
    std::size_t size() const { return n_; }

    double entry(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    const double* row(std::size_t i) const { return entries_.data() + i * n_; }

    /// Binary cache: header {magic, n, alpha, M, r_max, grading, grid hash},
    /// then row-major doubles.
    void save(const std::string& path) const;
    static RieszKernelTable load(const std::string& path);
    static RieszKernelTable load_or_build(const std::string& path, int dim, double alpha,
                                          std::shared_ptr<const RadialGrid> grid);

private:
    RieszKernelTable() = default;
    int dim_ = 0;
    double alpha_ = 0;
    std::shared_ptr<const RadialGrid> grid_;
    std::size_t n_ = 0;
    std::vector<double> entries_;
};

RieszKernelTable build_kernel_table(const ExponentConfig& cfg,
                                    std::shared_ptr<const RadialGrid> grid);

/// Potential of the power-law extension A s^{-gamma} beyond r_max,
/// integrated against the exact kernel (substitution s = r_max / t with
/// graded panels toward t = 0 and an analytic monopole stub).
double tail_potential(const RieszKernelTable& table, double A, double gamma, double r);

/// g = I_alpha f through the table plus the tail contribution of f; the
/// output tail is refit from the outer window when the values allow it.
/// Throws on grid mismatch and when f carries a tail with gamma <= alpha
/// (divergent potential).
RadialFunction apply_riesz(const RieszKernelTable& table, const RadialFunction& f);

/// Independent n-D oracle (n = 2 or 3): tensor midpoint quadrature of
/// Int_box f(y) |x-y|^{alpha-n} dy over the cube of the given half-width
/// centered at x, with the singular cell integrated in polar coordinates.
/// Test-side check for apply_riesz; not used on any solve path.
double brute_force_riesz(int dim, double alpha,
                         const std::function<double(const std::array<double, 3>&)>& f,
                         const std::array<double, 3>& x,
                         double half_width, int resolution);

} // namespace hlsys
