#pragma once

#include <cmath>
#include <stdexcept>

namespace sbmlab {

/// Dimension-dependent constants for the radial equations, the Bessel
/// changes of measure and the boundary-measure scalings. Immutable value
/// object; freely shareable across threads.
struct DimensionParams {
    int d = 0;          // spatial dimension, 1..3
    double p = 0;       // hitting exponent, p = mu + nu
    double alpha = 0;   // tail exponent, (p-2)/(4-d)
    double mu = 0;      // (d-2)/2
    double nu = 0;      // sqrt(mu^2 + 4(4-d))
    double lambda_d = 0;  // 2(4-d); u(r) = lambda_d / r^2 is the singular steady state
    double d_f = 0;     // boundary dimension, d + 2 - p

    /// Exit-measure normalization psi_0: log(1/eps)/pi in d=2, 1/(2*pi*eps)
    /// in d=3. Defined only for d in {2,3}.
    double psi0(double eps) const {
        if (d == 2) return std::log(std::max(1.0 / eps, 1.0)) / M_PI;
        if (d == 3) return 1.0 / (2.0 * M_PI * eps);
        throw std::domain_error("psi0: defined for d=2,3 only");
    }

    /// Green function of -Laplace (so that the singular part of the
    /// lambda-source solution is 2*lambda*G_d = lambda*psi0).
    double green(double r) const {
        if (d == 2) return std::log(1.0 / r) / (2.0 * M_PI);
        if (d == 3) return 1.0 / (4.0 * M_PI * r);
        throw std::domain_error("green: defined for d=2,3 only");
    }

    /// lambda_d / r^2, the maximal solution of the radial equation.
    double v_infinity(double r) const { return lambda_d / (r * r); }
};

/// Populate all constants for d in {1,2,3}; rejects anything else.
inline DimensionParams dimension_params(int d) {
    if (d < 1 || d > 3) throw std::domain_error("dimension_params: d must be 1, 2 or 3");
    DimensionParams q;
    q.d = d;
    q.mu = 0.5 * (d - 2);
    q.nu = std::sqrt(q.mu * q.mu + 4.0 * (4.0 - d));
    q.p = q.mu + q.nu;
    q.alpha = (q.p - 2.0) / (4.0 - d);
    q.lambda_d = 2.0 * (4.0 - d);
    q.d_f = d + 2.0 - q.p;
    return q;
}

}  // namespace sbmlab
