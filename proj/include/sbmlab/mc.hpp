#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace sbmlab {

/// (mean, standard error, replicate count, seed) of a Monte Carlo functional.
struct McEstimate {
    double mean = 0;
    double stderr_ = 0;
    long n = 0;
    uint64_t seed = 0;
};

inline McEstimate mc_from_samples(const std::vector<double>& xs, uint64_t seed) {
    if (xs.size() < 2) throw std::invalid_argument("mc_from_samples: need n >= 2");
    double m = 0;
    for (double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    double ss = 0;
    for (double x : xs) ss += (x - m) * (x - m);
    McEstimate e;
    e.mean = m;
    e.stderr_ = std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0) / static_cast<double>(xs.size()));
    e.n = static_cast<long>(xs.size());
    e.seed = seed;
    return e;
}

/// Deterministic parallel map: results land in index order regardless of the
/// worker count, so every downstream reduction is scheduling-independent.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                         unsigned max_threads = 0) {
    unsigned hw = std::thread::hardware_concurrency();
    unsigned nt = max_threads ? std::min(max_threads, hw ? hw : 1u) : (hw ? hw : 1u);
    nt = static_cast<unsigned>(std::min<std::size_t>(nt, n ? n : 1));
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::size_t chunk = (n + nt - 1) / nt;
    for (unsigned t = 0; t < nt; ++t) {
        std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

/// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value
/// (Stephens' small-sample correction).
struct KsResult {
    double statistic = 0;
    double p_value = 0;
};

inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    double ne = std::sqrt(na * nb / (na + nb));
    double lam = (ne + 0.12 + 0.11 / ne) * d;
    double q = 0;
    for (int k = 1; k <= 100; ++k) {
        double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
        q += term;
        if (std::abs(term) < 1e-12) break;
    }
    KsResult r;
    r.statistic = d;
    r.p_value = std::clamp(q, 0.0, 1.0);
    return r;
}

/// Ordinary least squares of y against x; returns slope, intercept, their
/// standard errors and R^2.
struct LineFit {
    double slope = 0, intercept = 0;
    double slope_stderr = 0, intercept_stderr = 0;
    double r2 = 0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line: need matching n >= 2");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= n; my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("fit_line: degenerate x");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - (f.intercept + f.slope * x[i]);
        sse += e * e;
    }
    double dof = n > 2 ? static_cast<double>(n - 2) : 1.0;
    double s2 = sse / dof;
    f.slope_stderr = std::sqrt(s2 / sxx);
    f.intercept_stderr = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
    f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
    return f;
}

}  // namespace sbmlab
