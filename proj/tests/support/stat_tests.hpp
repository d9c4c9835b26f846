#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace test_support {

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Kolmogorov-Smirnov distance between a sample and N(mu, sigma^2).
inline double ks_distance_normal(std::vector<double> xs, double mu, double sigma) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = norm_cdf((xs[i] - mu) / sigma);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

// Asymptotic KS critical value at significance alpha: sqrt(-ln(alpha/2)/2)/sqrt(n).
inline double ks_critical(std::size_t n, double alpha) {
    return std::sqrt(-std::log(alpha / 2.0) / 2.0) / std::sqrt(static_cast<double>(n));
}

// Wilson-Hilferty normal approximation of the chi-square upper tail: the
// returned z exceeds z_alpha roughly when the GOF statistic is significant.
inline double chi2_gof_z(const std::vector<double>& observed, const std::vector<double>& expected) {
    double x2 = 0.0;
    std::size_t df = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0) continue;
        const double d = observed[i] - expected[i];
        x2 += d * d / expected[i];
        ++df;
    }
    if (df > 0) --df;
    if (df == 0) return 0.0;
    const double k = static_cast<double>(df);
    const double c = 2.0 / (9.0 * k);
    return (std::cbrt(x2 / k) - (1.0 - c)) / std::sqrt(c);
}

inline double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double variance_of(const std::vector<double>& xs) {
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size());
}

}  // namespace test_support
