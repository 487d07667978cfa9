#include "sbmlab/radial_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

#include "sbmlab/mc.hpp"

namespace sbmlab {

namespace {

// State integrated in s = log r: y = (u, q) with q = du/ds = r u'.
// The radial equation u'' + (d-1)u'/r = u^2 becomes
//   du/ds = q,  dq/ds = (2-d) q + r^2 u^2.
struct OdeState {
    double u, q;
};

inline OdeState rhs(int d, double s, const OdeState& y) {
    double r2 = std::exp(2.0 * s);
    return {y.q, (2.0 - d) * y.q + r2 * y.u * y.u};
}

inline OdeState rk4_step(int d, double s, const OdeState& y, double h) {
    OdeState k1 = rhs(d, s, y);
    OdeState k2 = rhs(d, s + 0.5 * h, {y.u + 0.5 * h * k1.u, y.q + 0.5 * h * k1.q});
    OdeState k3 = rhs(d, s + 0.5 * h, {y.u + 0.5 * h * k2.u, y.q + 0.5 * h * k2.q});
    OdeState k4 = rhs(d, s + h, {y.u + h * k3.u, y.q + h * k3.q});
    return {y.u + h / 6.0 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u),
            y.q + h / 6.0 * (k1.q + 2 * k2.q + 2 * k3.q + k4.q)};
}

enum class Outcome { TooLow, TooHigh };

// Decaying-solution classifier. Integrates from (s0, y0) and decides on
// which side of the stable manifold of w = u r^2 = lambda_d the trajectory
// lies. Optionally records (u, du/dr) at the given s-targets.
struct March {
    int d;
    double lambda_d;
    double gamma_minus;   // decaying eigenrate of w - lambda_d
    double d2g;           // D(2 gamma_minus), for the quadratic correction
    double step_tol;
    double u_ceiling;     // blowup guard in u units

    Outcome run(double s0, OdeState y0, double s_end, const std::vector<double>& s_targets,
                std::vector<double>* out_u, std::vector<double>* out_du) const {
        double s = s0;
        OdeState y = y0;
        std::size_t next = 0;
        bool armed = y.u * std::exp(2.0 * s) <= 5.0 * lambda_d;
        double h = 1e-4;
        const double h_min = 1e-13;
        while (s < s_end) {
            double h_use = std::min(h, s_end - s);
            bool record = false;
            if (out_u && next < s_targets.size() && s + h_use >= s_targets[next]) {
                h_use = s_targets[next] - s;
                record = true;
            }
            if (h_use <= 0) {  // target coincides with current s
                if (record) { push(y, s, out_u, out_du); ++next; }
                continue;
            }
            OdeState big = rk4_step(d, s, y, h_use);
            OdeState half = rk4_step(d, s, y, 0.5 * h_use);
            OdeState two = rk4_step(d, s + 0.5 * h_use, half, 0.5 * h_use);
            double err = std::max(std::abs(big.u - two.u) / (std::abs(two.u) + 1e-30),
                                  std::abs(big.q - two.q) / (std::abs(two.q) + 1e-30));
            if (err > step_tol && h_use > h_min) {
                h = std::max(h_min, 0.5 * h_use);
                continue;
            }
            s += h_use;
            y = two;
            if (err > 0)
                h = std::clamp(0.9 * h_use * std::pow(step_tol / err, 0.2), 0.25 * h_use, 4.0 * h_use);
            else
                h = 4.0 * h_use;

            if (record) { push(y, s, out_u, out_du); ++next; }

            double w = y.u * std::exp(2.0 * s);
            if (w <= 5.0 * lambda_d) armed = true;
            if (y.u <= 0) return Outcome::TooLow;
            if ((armed && w >= 10.0 * lambda_d) || y.u >= u_ceiling) return Outcome::TooHigh;
        }
        // No event fired: project the deviation from the steady state onto
        // the growing mode (with a quadratic correction in z).
        double w = y.u * std::exp(2.0 * s);
        double z = w - lambda_d;
        double dz = (y.q + 2.0 * y.u) * std::exp(2.0 * s);
        double proj = dz - gamma_minus * z - gamma_minus * z * z / d2g;
        return proj > 0 ? Outcome::TooHigh : Outcome::TooLow;
    }

    static void push(const OdeState& y, double s, std::vector<double>* out_u,
                     std::vector<double>* out_du) {
        out_u->push_back(y.u);
        out_du->push_back(y.q / std::exp(s));
    }
};

March make_march(const DimensionParams& p, double step_tol, double u_ceiling) {
    double b = p.d - 6.0;
    double gm = 0.5 * (-b - std::sqrt(b * b + 4.0 * p.lambda_d));
    double d2g = 4.0 * gm * gm + b * 2.0 * gm - p.lambda_d;
    return {p.d, p.lambda_d, gm, d2g, step_tol, u_ceiling};
}

// Bisection on a monotone shooting parameter; classify(c) must map low
// parameters to TooLow and high ones to TooHigh.
template <typename F>
double bisect(double lo, double hi, const F& classify, int max_iter, const char* what) {
    for (int i = 0; i < max_iter; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) return mid;
        if (classify(mid) == Outcome::TooLow)
            lo = mid;
        else
            hi = mid;
    }
    throw SolverError(std::string(what) + ": bisection budget exhausted", lo, hi);
}

std::vector<double> log_grid(double t_lo, double t_hi, int points_per_decade) {
    int n = std::max(4, static_cast<int>(std::ceil(std::log10(t_hi / t_lo) * points_per_decade)) + 1);
    std::vector<double> t(n);
    double l0 = std::log(t_lo), l1 = std::log(t_hi);
    for (int i = 0; i < n; ++i) t[i] = std::exp(l0 + (l1 - l0) * i / (n - 1));
    t.front() = t_lo;
    t.back() = t_hi;
    return t;
}

}  // namespace

RadialProfile solve_u_lambda_eps(const DimensionParams& params, double lambda, double eps,
                                 double r_max, const SolveOptions& opts) {
    if (params.d != 2 && params.d != 3)
        throw std::domain_error("solve_u_lambda_eps: d must be 2 or 3");
    if (!(lambda > 0) || !std::isfinite(lambda) || !(eps > 0))
        throw std::invalid_argument("solve_u_lambda_eps: need finite lambda > 0, eps > 0");
    if (r_max < 100.0 * eps)
        throw std::invalid_argument("solve_u_lambda_eps: r_max must be >= 100*eps");
    if (r_max > 2000.0 * eps)
        throw SolverError("solve_u_lambda_eps: domain too wide to shoot in double precision",
                          eps, r_max);

    // Grid log-spaced in (r - eps) resolves the steep layer at large lambda.
    std::vector<double> t = log_grid(opts.rel_inner * eps, r_max - eps, opts.points_per_decade);
    std::vector<double> s_targets(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) s_targets[i] = std::log(eps + t[i]);

    double s0 = std::log(eps);
    double s_end = std::log(r_max) + std::log(opts.overshoot_factor);
    March march = make_march(params, opts.step_tolerance, 20.0 * lambda);

    auto classify = [&](double q0) {
        return march.run(s0, {lambda, q0}, s_end, {}, nullptr, nullptr);
    };

    double hi = 0.0;  // zero slope at the boundary always blows up
    double scale = eps * eps * (std::pow(lambda, 1.5) + lambda + 1.0);
    double lo = -scale;
    int guard = 0;
    while (classify(lo) == Outcome::TooHigh) {
        lo *= 4.0;
        if (++guard > 60) throw SolverError("solve_u_lambda_eps: no lower bracket", lo, hi);
    }
    double q0 = bisect(lo, hi, classify, opts.max_bisect, "solve_u_lambda_eps");

    RadialProfile prof;
    prof.kind = ProfileKind::Ueps;
    prof.d = params.d;
    prof.lambda = lambda;
    prof.eps = eps;
    prof.inner_offset = eps;
    prof.solver_tolerance = 1e-6;
    prof.grid.reserve(t.size() + 1);
    prof.grid.push_back(eps);
    for (double ti : t) prof.grid.push_back(eps + ti);
    prof.values.push_back(lambda);
    prof.derivs.push_back(q0 / eps);
    march.run(s0, {lambda, q0}, s_end, s_targets, &prof.values, &prof.derivs);
    if (prof.values.size() != prof.grid.size())
        throw SolverError("solve_u_lambda_eps: trajectory left the band inside the grid",
                          prof.grid[prof.values.size() - 1], r_max);
    return prof;
}

RadialProfile solve_u_infinity_eps(const DimensionParams& params, double eps, double r_max,
                                   const SolveOptions& opts) {
    double lambda_cap = 1e6 / (eps * eps);
    RadialProfile prof = solve_u_lambda_eps(params, lambda_cap, eps, r_max, opts);
    prof.kind = ProfileKind::UInfEps;
    prof.lambda = std::numeric_limits<double>::infinity();
    return prof;
}

RadialProfile solve_v_lambda(const DimensionParams& params, double lambda, double r_min,
                             double r_max, const SolveOptions& opts) {
    if (params.d != 2 && params.d != 3)
        throw std::domain_error("solve_v_lambda: d must be 2 or 3");
    if (!(lambda > 0) || !(r_min > 0) || !(r_max > 4.0 * r_min))
        throw std::invalid_argument("solve_v_lambda: need lambda > 0, 0 < r_min << r_max");
    if (r_max / r_min > 5e5)
        throw SolverError("solve_v_lambda: domain too wide to shoot in double precision",
                          r_min, r_max);

    // Initial data carries the 2*lambda*G_d singularity (plus the known log
    // correction in d=3); b is the one remaining degree of freedom.
    double A = (params.d == 3) ? lambda / (2.0 * M_PI) : lambda / M_PI;
    auto initial = [&](double b) -> OdeState {
        double u0, du0;
        if (params.d == 3) {
            u0 = A / r_min + A * A * std::log(r_min) + b;
            du0 = -A / (r_min * r_min) + A * A / r_min;
        } else {
            u0 = A * std::log(1.0 / r_min) + b;
            du0 = -A / r_min;
        }
        return {u0, du0 * r_min};
    };

    double s0 = std::log(r_min);
    double s_end = std::log(r_max) + std::log(opts.overshoot_factor);
    double u0_scale = initial(0.0).u;
    March march = make_march(params, opts.step_tolerance, std::max(10.0 * u0_scale, 1e3));

    auto classify = [&](double b) {
        OdeState y0 = initial(b);
        if (y0.u <= 0) return Outcome::TooLow;
        return march.run(s0, y0, s_end, {}, nullptr, nullptr);
    };

    double b_scale = std::max({params.lambda_d, A * A * std::abs(std::log(r_min)), 1.0});
    double lo = -b_scale, hi = b_scale;
    int guard = 0;
    while (classify(lo) == Outcome::TooHigh) {
        lo *= 4.0;
        if (++guard > 60) throw SolverError("solve_v_lambda: no lower bracket", lo, hi);
    }
    guard = 0;
    while (classify(hi) == Outcome::TooLow) {
        hi *= 4.0;
        if (++guard > 60) throw SolverError("solve_v_lambda: no upper bracket", lo, hi);
    }
    double b = bisect(lo, hi, classify, opts.max_bisect, "solve_v_lambda");

    std::vector<double> r = log_grid(r_min, r_max, opts.points_per_decade);
    std::vector<double> s_targets(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) s_targets[i] = std::log(r[i]);

    RadialProfile prof;
    prof.kind = ProfileKind::Vlambda;
    prof.d = params.d;
    prof.lambda = lambda;
    prof.eps = 0;
    prof.inner_offset = 0;
    prof.solver_tolerance = 1e-6;
    prof.grid = r;
    OdeState y0 = initial(b);
    prof.values.push_back(y0.u);
    prof.derivs.push_back(y0.q / r_min);
    std::vector<double> rest(s_targets.begin() + 1, s_targets.end());
    march.run(s0, y0, s_end, rest, &prof.values, &prof.derivs);
    if (prof.values.size() != prof.grid.size())
        throw SolverError("solve_v_lambda: trajectory left the band inside the grid",
                          prof.grid[prof.values.size() - 1], r_max);

    // Diagnose unresolved singular matching: extrapolate u / (2 lambda G_d)
    // to r -> 0 from the three smallest radii and require it within 5% of 1.
    std::array<double, 3> qv{}, vv{};
    for (int i = 0; i < 3; ++i) {
        double ri = prof.grid[i];
        qv[i] = prof.values[i] / (2.0 * lambda * params.green(ri));
        vv[i] = (params.d == 3) ? ri * (1.0 + std::abs(std::log(ri)))
                                : 1.0 / std::log(1.0 / ri);
    }
    double slope = (qv[2] - qv[0]) / (vv[2] - vv[0]);
    double q_at_zero = qv[0] - slope * vv[0];
    if (std::abs(q_at_zero - 1.0) > 0.05)
        throw SolverError("solve_v_lambda: r_min too large to resolve the singular matching "
                          "(fitted coefficient off by >5%)",
                          q_at_zero, 1.0);
    return prof;
}

// ---------------------------------------------------------------------------
// Difference orbit: y(s) = r^2 (V_inf - V^lambda)(r) solves the autonomous
// equation y'' + (d-6) y' - lambda_d y + y^2 = 0 connecting lambda_d (r -> 0)
// to 0 (r -> infinity); every lambda is a translate of one orbit. Integrated
// against the flow (sigma = -s) both endpoints are attracting, so no
// shooting is involved and the tail stays accurate at any lambda.
// ---------------------------------------------------------------------------

namespace {

struct DifferenceOrbit {
    double sigma_step = 0.01;
    std::vector<double> y;     // y at sigma = i * sigma_step, increasing
    std::vector<double> g;     // dy/dsigma
    double y_tail0 = 0;        // y at sigma = 0
    double gamma_minus = 0;    // tail rate: y ~ y_tail0 * exp(|gamma_minus| sigma)
    double a1 = 0;             // shift: y_lambda(s) = orbit(a1 - ln(lambda)/(4-d) - s)

    double value_at_sigma(double sig) const {
        if (sig <= 0) return y_tail0 * std::exp(-gamma_minus * sig);  // gamma_minus < 0
        double idx = sig / sigma_step;
        auto i = static_cast<std::size_t>(idx);
        if (i + 1 >= y.size()) return y.back();
        double f = idx - static_cast<double>(i);
        return y[i] * (1.0 - f) + y[i + 1] * f;
    }
    double deriv_at_sigma(double sig) const {  // dy/dsigma
        if (sig <= 0) return -gamma_minus * value_at_sigma(sig);
        double idx = sig / sigma_step;
        auto i = static_cast<std::size_t>(idx);
        if (i + 1 >= g.size()) return 0.0;
        double f = idx - static_cast<double>(i);
        return g[i] * (1.0 - f) + g[i + 1] * f;
    }
    // inverse of the monotone y(sigma)
    double sigma_at_value(double yv) const {
        auto it = std::lower_bound(y.begin(), y.end(), yv);
        if (it == y.begin() || it == y.end())
            throw std::invalid_argument("difference orbit: value outside transition range");
        std::size_t i = static_cast<std::size_t>(it - y.begin());
        double f = (yv - y[i - 1]) / (y[i] - y[i - 1]);
        return (static_cast<double>(i - 1) + f) * sigma_step;
    }
};

const DifferenceOrbit& difference_orbit(const DimensionParams& params) {
    static std::mutex mtx;
    static std::array<DifferenceOrbit, 4> cache;
    static std::array<bool, 4> built{};
    std::lock_guard<std::mutex> lock(mtx);
    if (built[params.d]) return cache[params.d];

    DifferenceOrbit orb;
    double b = params.d - 6.0;
    orb.gamma_minus = 0.5 * (-b - std::sqrt(b * b + 4.0 * params.lambda_d));
    orb.y_tail0 = 1e-9 * params.lambda_d;

    // y'' = -(6-d) y' + lambda_d y - y^2, forward in sigma, fixed-step RK4.
    auto f = [&](const std::array<double, 2>& v) -> std::array<double, 2> {
        return {v[1], -(6.0 - params.d) * v[1] + params.lambda_d * v[0] - v[0] * v[0]};
    };
    std::array<double, 2> v{orb.y_tail0, -orb.gamma_minus * orb.y_tail0};
    const double h = 5e-4;
    const int record_every = 20;
    orb.sigma_step = h * record_every;
    orb.y.push_back(v[0]);
    orb.g.push_back(v[1]);
    for (long step = 1; step < 2000000; ++step) {
        auto k1 = f(v);
        auto k2 = f({v[0] + 0.5 * h * k1[0], v[1] + 0.5 * h * k1[1]});
        auto k3 = f({v[0] + 0.5 * h * k2[0], v[1] + 0.5 * h * k2[1]});
        auto k4 = f({v[0] + h * k3[0], v[1] + h * k3[1]});
        v[0] += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        v[1] += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        if (step % record_every == 0) {
            orb.y.push_back(v[0]);
            orb.g.push_back(v[1]);
            if (params.lambda_d - v[0] <= 1e-12 * params.lambda_d) break;
        }
    }

    // Calibrate the translation against a directly shot V^1 profile.
    DimensionParams p = params;
    RadialProfile v1 = solve_v_lambda(p, 1.0, 1e-3, 400.0);
    double acc = 0;
    int cnt = 0;
    for (std::size_t i = 0; i < v1.grid.size(); ++i) {
        double r = v1.grid[i];
        double y_val = r * r * (params.v_infinity(r) - v1.values[i]);
        if (y_val > 0.2 * params.lambda_d && y_val < 0.8 * params.lambda_d) {
            acc += std::log(r) + orb.sigma_at_value(y_val);
            ++cnt;
        }
    }
    if (cnt == 0) throw SolverError("difference orbit: calibration window empty", 0, 0);
    orb.a1 = acc / cnt;

    cache[params.d] = std::move(orb);
    built[params.d] = true;
    return cache[params.d];
}

}  // namespace

RadialProfile difference_profile(const DimensionParams& params, double lambda, double r_min,
                                 double r_max, int points_per_decade) {
    if (params.d != 2 && params.d != 3)
        throw std::domain_error("difference_profile: d must be 2 or 3");
    if (!(lambda > 0) || !(r_min > 0) || !(r_max > r_min))
        throw std::invalid_argument("difference_profile: bad arguments");
    const DifferenceOrbit& orb = difference_orbit(params);
    double a_lambda = orb.a1 - std::log(lambda) / (4.0 - params.d);

    RadialProfile prof;
    prof.kind = ProfileKind::Dlambda;
    prof.d = params.d;
    prof.lambda = lambda;
    prof.inner_offset = 0;
    prof.solver_tolerance = 1e-6;
    prof.grid = log_grid(r_min, r_max, points_per_decade);
    prof.values.resize(prof.grid.size());
    prof.derivs.resize(prof.grid.size());
    for (std::size_t i = 0; i < prof.grid.size(); ++i) {
        double r = prof.grid[i];
        double sig = a_lambda - std::log(r);
        double y = orb.value_at_sigma(sig);
        double g = orb.deriv_at_sigma(sig);
        prof.values[i] = y / (r * r);
        prof.derivs[i] = -(g + 2.0 * y) / (r * r * r);  // dy/ds = -g
    }
    return prof;
}

double d_lambda_eval(const DimensionParams& params, double lambda, double r) {
    const DifferenceOrbit& orb = difference_orbit(params);
    double sig = orb.a1 - std::log(lambda) / (4.0 - params.d) - std::log(r);
    return orb.value_at_sigma(sig) / (r * r);
}

V1Result v1_lambda(const DimensionParams& params, double lambda, double r, double h) {
    if (!(lambda > 0) || !(r > 0) || !(h > 0) || h >= 0.5)
        throw std::invalid_argument("v1_lambda: bad arguments");
    auto central = [&](double hh) {
        // V^{l(1+h)} - V^{l(1-h)} = d^{l(1-h)} - d^{l(1+h)}
        return (d_lambda_eval(params, lambda * (1.0 - hh), r) -
                d_lambda_eval(params, lambda * (1.0 + hh), r)) /
               (2.0 * lambda * hh);
    };
    V1Result res;
    res.h_used = h;
    res.value = central(h);
    double refined = central(0.5 * h);
    res.h_sensitive = std::abs(res.value - refined) > 0.1 * std::abs(refined);
    return res;
}

TailPrefactorResult tail_prefactor(const DimensionParams& params,
                                   const std::vector<double>& lambda_grid,
                                   const std::vector<double>& x_grid) {
    if (lambda_grid.size() < 2 || x_grid.empty())
        throw std::invalid_argument("tail_prefactor: need >= 2 lambdas and >= 1 x");
    double span = *std::max_element(lambda_grid.begin(), lambda_grid.end()) /
                  *std::min_element(lambda_grid.begin(), lambda_grid.end());
    if (span < 100.0)
        throw std::invalid_argument("tail_prefactor: lambda_grid must span >= 2 decades");

    std::vector<double> vals;
    for (double lam : lambda_grid)
        for (double x : x_grid)
            vals.push_back(std::pow(lam, params.alpha) * d_lambda_eval(params, lam, x) *
                           std::pow(x, params.p));
    double mean = 0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double resid = 0;
    for (double v : vals) resid = std::max(resid, std::abs(v - mean) / mean);

    TailPrefactorResult out;
    out.constant = mean;
    out.c_112 = mean / std::tgamma(params.alpha + 1.0);
    out.fit_residual = resid;

    double lam_top = *std::max_element(lambda_grid.begin(), lambda_grid.end());
    std::vector<double> lx, ly;
    for (double x : x_grid) {
        lx.push_back(std::log(x));
        ly.push_back(std::log(d_lambda_eval(params, lam_top, x)));
    }
    out.slope_in_x = x_grid.size() >= 2 ? fit_line(lx, ly).slope : 0.0;
    std::vector<double> ll, lv;
    for (double lam : lambda_grid) {
        ll.push_back(std::log(lam));
        lv.push_back(std::log(d_lambda_eval(params, lam, x_grid.front())));
    }
    out.slope_in_lambda = fit_line(ll, lv).slope;

    if (resid > 0.10)
        throw SolverError("tail_prefactor: asymptotic regime not reached (residual > 10%)",
                          *std::min_element(vals.begin(), vals.end()),
                          *std::max_element(vals.begin(), vals.end()));
    return out;
}

RadialProfile::Eval RadialProfile::eval(double r) const {
    Eval out;
    if ((kind == ProfileKind::Ueps || kind == ProfileKind::UInfEps) && r <= eps) {
        out.value = values.front();
        out.clamped = true;
        return out;
    }
    if (r <= grid.front()) {
        out.value = values.front();
        out.clamped = (r < grid.front());
        return out;
    }
    if (r >= grid.back()) {
        out.value = values.back();
        out.clamped = (r > grid.back());
        return out;
    }
    auto it = std::upper_bound(grid.begin(), grid.end(), r);
    std::size_t i = static_cast<std::size_t>(it - grid.begin());
    double rl = grid[i - 1], rh = grid[i];
    double ul = values[i - 1], uh = values[i];
    if (ul > 0 && uh > 0 && r > inner_offset && rl > inner_offset) {
        double tl = std::log(rl - inner_offset), th = std::log(rh - inner_offset);
        double f = (std::log(r - inner_offset) - tl) / (th - tl);
        out.value = std::exp(std::log(ul) * (1.0 - f) + std::log(uh) * f);
    } else {
        double f = (r - rl) / (rh - rl);
        out.value = ul * (1.0 - f) + uh * f;
    }
    return out;
}

double residual_norm(const RadialProfile& profile) {
    const auto& r = profile.grid;
    const auto& u = profile.values;
    std::size_t start = (profile.kind == ProfileKind::Ueps || profile.kind == ProfileKind::UInfEps)
                            ? 1
                            : 0;
    if (r.size() < start + 5) return 0.0;
    double c = profile.inner_offset;
    double h = std::log(r[start + 1] - c) - std::log(r[start] - c);
    double worst = 0;
    for (std::size_t i = start + 2; i + 2 < r.size(); ++i) {
        double t = r[i] - c;
        double du = (-u[i + 2] + 8 * u[i + 1] - 8 * u[i - 1] + u[i - 2]) / (12 * h);
        double d2u = (-u[i + 2] + 16 * u[i + 1] - 30 * u[i] + 16 * u[i - 1] - u[i - 2]) /
                     (12 * h * h);
        double up = du / t;
        double upp = (d2u - du) / (t * t);
        double resid = upp + (profile.d - 1) * up / r[i] - u[i] * u[i];
        double scale = std::abs(upp) + (profile.d - 1) * std::abs(up) / r[i] + u[i] * u[i] + 1e-300;
        worst = std::max(worst, std::abs(resid) / scale);
    }
    return worst;
}

}  // namespace sbmlab
