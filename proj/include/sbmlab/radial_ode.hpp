#pragma once

#include <limits>
#include <string>
#include <vector>

#include "sbmlab/constants.hpp"

namespace sbmlab {

/// Shooting/bisection failure; carries the last bracketing interval.
struct SolverError : std::runtime_error {
    SolverError(const std::string& what, double lo, double hi)
        : std::runtime_error(what), bracket_lo(lo), bracket_hi(hi) {}
    double bracket_lo, bracket_hi;
};

enum class ProfileKind { Vlambda, Ueps, UInfEps, Dlambda, V1lambda };

/// A solved radial function u(r) with derivative on a graded grid.
/// For Ueps/UInfEps kinds the grid is log-spaced in (r - eps) with the
/// boundary point r = eps prepended; for the others it is log-spaced in r.
struct RadialProfile {
    ProfileKind kind = ProfileKind::Vlambda;
    int d = 0;
    double lambda = 0;  // +inf marker for UInfEps
    double eps = 0;     // inner boundary radius (0 for Vlambda-kind)
    std::vector<double> grid;    // strictly increasing radii
    std::vector<double> values;  // u_i >= 0
    std::vector<double> derivs;  // du/dr at r_i
    double solver_tolerance = 1e-6;
    double inner_offset = 0;  // grid is uniform in log(r - inner_offset)

    struct Eval {
        double value = 0;
        bool clamped = false;  // r at or below the inner boundary
    };
    /// Interpolated value (log-log where positive). Queries at r <= eps on
    /// Ueps profiles return the boundary value with the clamped flag set;
    /// callers must not integrate across it.
    Eval eval(double r) const;

    double r_min() const { return grid.front(); }
    double r_max() const { return grid.back(); }
};

struct SolveOptions {
    double rel_inner = 1e-4;      // first grid point at eps*(1+rel_inner) for U-kinds
    int points_per_decade = 120;  // output grid density
    double step_tolerance = 1e-9; // RK4 per-step local error tolerance
    double overshoot_factor = 4;  // integrate past r_max by this factor before classifying
    int max_bisect = 256;
};

/// Boundary-value problem u'' + (d-1)u'/r = u^2 on (eps, r_max) with
/// u(eps) = lambda and u decaying at infinity, solved by bisection shooting
/// on u'(eps).
RadialProfile solve_u_lambda_eps(const DimensionParams& params, double lambda, double eps,
                                 double r_max, const SolveOptions& opts = {});

/// The lambda -> infinity envelope, realized as lambda_cap = 1e6 / eps^2.
/// The sandwich V_inf <= u <= 3(4-d)/r^2 (at r/eps large) is the check on
/// this approximation.
RadialProfile solve_u_infinity_eps(const DimensionParams& params, double eps, double r_max,
                                   const SolveOptions& opts = {});

/// Solution of Delta u / 2 = u^2 / 2 - lambda * delta_0: matches the
/// singular data 2*lambda*G_d(r) at r_min and decays at r_max. Shooting is
/// on the free constant next to the singular part.
RadialProfile solve_v_lambda(const DimensionParams& params, double lambda, double r_min,
                             double r_max, const SolveOptions& opts = {});

/// V_inf - V_lambda on a log grid, computed from the scale-invariant
/// difference orbit (stable in both directions, so it stays accurate at
/// lambda values where direct shooting cannot resolve the difference).
RadialProfile difference_profile(const DimensionParams& params, double lambda, double r_min,
                                 double r_max, int points_per_decade = 120);

/// Pointwise V_inf - V^lambda via the difference orbit (any lambda, any r).
double d_lambda_eval(const DimensionParams& params, double lambda, double r);

struct V1Result {
    double value = 0;
    bool h_sensitive = false;  // halving h moved the result by > 10%
    double h_used = 0;
};

/// d/dlambda V^lambda(r) by the central difference
/// (V^{lambda(1+h)}(r) - V^{lambda(1-h)}(r)) / (2 lambda h), h = 1e-3,
/// with an automatic Richardson sensitivity check.
V1Result v1_lambda(const DimensionParams& params, double lambda, double r, double h = 1e-3);

struct TailPrefactorResult {
    double constant = 0;       // fitted plateau of lambda^alpha * d^lambda(x) * |x|^p
    double c_112 = 0;          // constant / Gamma(alpha + 1)
    double fit_residual = 0;   // max relative deviation from the fitted constant
    double slope_in_x = 0;     // d log d^lambda / d log|x| at the largest lambda
    double slope_in_lambda = 0;  // d log d^lambda / d log lambda at the first x
};

/// Fits lambda^alpha (V_inf - V^lambda)(x) |x|^p to a constant over the
/// given grids. Throws SolverError when the fit residual exceeds 10% of the
/// constant (asymptotic regime not reached).
TailPrefactorResult tail_prefactor(const DimensionParams& params,
                                   const std::vector<double>& lambda_grid,
                                   const std::vector<double>& x_grid);

/// Max scaled residual of u'' + (d-1)u'/r - u^2 over interior grid points
/// (4th-order differences on the profile's log grid).
double residual_norm(const RadialProfile& profile);

}  // namespace sbmlab
