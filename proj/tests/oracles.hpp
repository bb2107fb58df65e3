#ifndef MIXLAB_TEST_ORACLES_HPP
#define MIXLAB_TEST_ORACLES_HPP

// Independent reference computations for the test suites. Everything here
// is deliberately brute-force (quadrature, exhaustive enumeration, two-pass
// statistics) and stays independent of the library implementation paths it
// is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "mixlab/linalg.hpp"

namespace mixlab::oracles {

/// Composite Simpson rule on [a, b] with n subintervals (n even).
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + h * i) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline double beta_log_pdf(double x, double a, double b) {
    return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
           (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

inline double beta_pdf(double x, double a, double b) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return std::exp(beta_log_pdf(x, a, b));
}

/// E_{l~Beta(a,b)}[f(l)] by Simpson quadrature, one half per endpoint.
/// Shapes below one make the density singular at the matching endpoint;
/// that half is substituted (l = t^(1/a), resp. 1-l = u^(1/b)) so the
/// integrand stays bounded. Smooth shapes integrate directly.
inline double beta_expectation(const std::function<double(double)>& f, double a,
                               double b, int nodes = 10000) {
    const double log_beta =
        std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double norm = std::exp(-log_beta);
    const double eps = 1e-13;

    // left: integral over l in (0, 1/2] of f(l) l^(a-1) (1-l)^(b-1)
    double left;
    if (a >= 1.0) {
        left = simpson(
            [&](double l) {
                if (l <= 0.0) return 0.0;
                return f(l) * std::pow(l, a - 1.0) * std::pow(1.0 - l, b - 1.0);
            },
            eps, 0.5, nodes / 2);
    } else {
        left = simpson(
            [&](double t) {
                if (t <= 0.0) return 0.0;
                const double l = std::pow(t, 1.0 / a);
                return f(l) * std::pow(1.0 - l, b - 1.0) / a;
            },
            0.0, std::pow(0.5, a), nodes / 2);
    }

    // right: integral over l in (1/2, 1)
    double right;
    if (b >= 1.0) {
        right = simpson(
            [&](double l) {
                if (l >= 1.0) return 0.0;
                return f(l) * std::pow(l, a - 1.0) * std::pow(1.0 - l, b - 1.0);
            },
            0.5, 1.0 - eps, nodes / 2);
    } else {
        right = simpson(
            [&](double u) {
                if (u <= 0.0) return 0.0;
                const double l = 1.0 - std::pow(u, 1.0 / b);
                return f(l) * std::pow(l, a - 1.0) / b;
            },
            0.0, std::pow(0.5, b), nodes / 2);
    }
    return (left + right) * norm;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        const double fa = double(i) / double(a.size());
        const double fb = double(j) / double(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

/// Asymptotic two-sample KS p-value.
inline double ks_pvalue(double d, std::size_t n1, std::size_t n2) {
    const double ne = double(n1) * double(n2) / double(n1 + n2);
    const double z = d * std::sqrt(ne);
    double p = 0.0;
    for (int k = 1; k <= 100; ++k)
        p += 2.0 * (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * z * z);
    return std::clamp(p, 0.0, 1.0);
}

/// Exact E_xi[ B * ||(1/n) sum_i xi_i x_i|| ] by enumerating all 2^n sign
/// vectors; usable for n <= ~20.
inline double exhaustive_rademacher_ball(const Mat& inputs, double radius_b) {
    const std::size_t n = inputs.rows;
    const std::size_t p = inputs.cols;
    const std::size_t total = std::size_t(1) << n;
    double sum = 0.0;
    Vec acc(p);
    for (std::size_t mask = 0; mask < total; ++mask) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double s = (mask >> i) & 1 ? 1.0 : -1.0;
            for (std::size_t k = 0; k < p; ++k) acc[k] += s * inputs.at(i, k) / double(n);
        }
        sum += radius_b * norm2(acc);
    }
    return sum / double(total);
}

/// Two-pass covariance of matrix rows, 1/n normalization.
inline Mat two_pass_covariance(const Mat& rows) {
    const std::size_t n = rows.rows;
    const std::size_t d = rows.cols;
    Vec mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < d; ++k) mean[k] += rows.at(i, k) / double(n);
    Mat cov(d, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b)
                cov.at(a, b) += (rows.at(i, a) - mean[a]) * (rows.at(i, b) - mean[b]) /
                                double(n);
    return cov;
}

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;
    double se_mean = 0.0;
};

inline MeanVar mean_var(const std::vector<double>& xs) {
    MeanVar out;
    for (double v : xs) out.mean += v;
    out.mean /= double(xs.size());
    for (double v : xs) out.var += (v - out.mean) * (v - out.mean);
    out.var /= double(xs.size() - 1);
    out.se_mean = std::sqrt(out.var / double(xs.size()));
    return out;
}

}  // namespace mixlab::oracles

#endif
