#pragma once

#include <stdexcept>

namespace hlsys {

/// Admissible parameter set of the integral system
///
///     u(x) = \int v(y)^q / |x-y|^{n-alpha} dy,
///     v(x) = \int u(y)^p / |x-y|^{n-alpha} dy,
///
/// on R^n with 0 < alpha < n.  The exponents are tied together by the
/// critical relation
///
///     1/(p+1) + 1/(q+1) + alpha/n = 1,
///
/// and both p and q must exceed alpha/(n-alpha).  The dual exponents
/// p0 = (p+1)/p and q0 = (q+1)/q are the Lebesgue indices of the
/// associated bilinear inequality; equivalently p = 1/(p0-1).
struct ExponentConfig {
    int n = 0;          ///< space dimension, >= 2
    double alpha = 0;   ///< potential order, 0 < alpha < n
    double p = 0;
    double q = 0;
    double p0 = 0;      ///< (p+1)/p
    double q0 = 0;      ///< (q+1)/q

    /// alpha/(n-alpha), the open lower bound for p and q.
    double exponent_floor() const { return alpha / (n - alpha); }
    /// (n+alpha)/(n-alpha), the symmetric (conformal) exponent.
    double conformal_exponent() const { return (n + alpha) / (n - alpha); }
};

/// Build a config from (n, alpha, p); q is solved from the critical
/// relation.  Throws std::domain_error for alpha outside (0, n) or n < 2,
/// std::invalid_argument if p (or the resulting q) is inadmissible.
ExponentConfig make_config(int n, double alpha, double p);

/// Build a config from the dual index p0 instead: q0 is solved from
/// 1/p0 + 1/q0 = 1 + alpha/n and p = 1/(p0-1), q = 1/(q0-1).
ExponentConfig make_config_from_p0(int n, double alpha, double p0);

/// Same-point checks the constructors run; exposed for fuzzing.
void validate_config(const ExponentConfig& cfg);

/// True when p = q = (n+alpha)/(n-alpha) (single-equation case).
bool is_conformal(const ExponentConfig& cfg, double tol = 1e-9);

/// Swap the roles of (p, q); the critical relation is symmetric so the
/// result is again valid.
ExponentConfig swapped(const ExponentConfig& cfg);

/// The auxiliary index r = P - (alpha/n)(P+1) where P = max(p, q).
/// The roles of p and q are swapped internally when p < q; the caller's
/// config is not modified.  The result always satisfies r >= 1 and
/// min(p,q) * r >= 1 for admissible configs; a violation throws
/// std::logic_error since it can only come from an invalid config.
double choose_r(const ExponentConfig& cfg);

/// Absolute discrepancies of the algebraic identities a valid config
/// must satisfy.  All of them are consequences of the critical relation,
/// so they double as an internal-consistency audit of the arithmetic.
struct IdentityAudit {
    /// |1/(p+1) + 1/(q+1) + alpha/n - 1|
    double critical_relation = 0;
    /// |pq - 1 - (alpha/n)(p+1)(q+1)|
    double product_identity = 0;
    /// |[P - (alpha/n)(P+1)]Q - 1 - (alpha/n)(P+1)|, P = max(p,q)
    double r_identity = 0;
    /// |np/(p+1) - alpha - n/(q+1)|  (decay exponent bookkeeping)
    double singular_exponent_u = 0;
    /// |nq/(q+1) - alpha - n/(p+1)|
    double singular_exponent_v = 0;

    double max_abs() const;
};

IdentityAudit identity_audit(const ExponentConfig& cfg);

} // namespace hlsys
