#include "ric/estimator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ric {

namespace {

void check_moment_domain(double p, uint64_t D, const char* fn) {
    if (!(p >= 0.0) || p >= 1.0) {
        throw std::domain_error(std::string(fn) + ": p must lie in [0,1), got " +
                                std::to_string(p));
    }
    if (D == 0) throw std::domain_error(std::string(fn) + ": D must be at least 1");
}

}  // namespace

double frequency_from_stats(const SurvivalStats& st) {
    if (st.K_total == 0) return 0.0;
    return static_cast<double>(st.K_total) /
           static_cast<double>(st.K_total + st.I_total);
}

double frequency(const ChainSet& cs, const Pattern& s) {
    return frequency_from_stats(survival_stats(cs, s));
}

double confidence(const std::vector<double>& freqs, const ClassPrior& priors, uint32_t target) {
    if (freqs.size() != priors.priors.size()) {
        throw std::invalid_argument("confidence: frequency and prior vectors differ in length");
    }
    if (target >= freqs.size()) throw std::invalid_argument("confidence: target class out of range");
    double denom = 0.0;
    for (std::size_t c = 0; c < freqs.size(); ++c) {
        if (freqs[c] < 0.0 || priors.priors[c] < 0.0) {
            throw std::invalid_argument("confidence: negative frequency or prior");
        }
        denom += freqs[c] * priors.priors[c];
    }
    if (denom <= 0.0) {
        throw std::domain_error("confidence undefined: pattern has zero weighted frequency");
    }
    return freqs[target] * priors.priors[target] / denom;
}

double expected_k(double p, uint64_t D) {
    check_moment_domain(p, D, "expected_k");
    const double Dd = static_cast<double>(D);
    return p * (1.0 - std::pow(p, Dd)) / (1.0 - p);
}

double variance_k(double p, uint64_t D) {
    check_moment_domain(p, D, "variance_k");
    const double Dd = static_cast<double>(D);
    const double q = 1.0 - p;
    const double num = p - (2.0 * Dd + 1.0) * std::pow(p, Dd + 1.0) +
                       (2.0 * Dd + 1.0) * std::pow(p, Dd + 2.0) - std::pow(p, 2.0 * Dd + 2.0);
    return num / (q * q);
}

double mean_chi(double p, uint64_t D) {
    check_moment_domain(p, D, "mean_chi");
    return 1.0 - std::pow(p, static_cast<double>(D));
}

double variance_chi(double p, uint64_t D) {
    check_moment_domain(p, D, "variance_chi");
    const double pD = std::pow(p, static_cast<double>(D));
    return pD * (1.0 - pD);
}

double cov_k_chi(double p, uint64_t D) {
    check_moment_domain(p, D, "cov_k_chi");
    const double Dd = static_cast<double>(D);
    const double num = -Dd * std::pow(p, Dd) + (Dd + 1.0) * std::pow(p, Dd + 1.0) -
                       std::pow(p, 2.0 * Dd + 1.0);
    return num / (1.0 - p);
}

double asymptotic_var_freq(double p, uint64_t D) {
    if (!(p > 0.0) || p >= 1.0) {
        throw std::domain_error("asymptotic_var_freq: p must lie in (0,1), got " +
                                std::to_string(p));
    }
    if (D == 0) throw std::domain_error("asymptotic_var_freq: D must be at least 1");
    const double q = 1.0 - p;
    return p * q * q / (1.0 - std::pow(p, static_cast<double>(D)));
}

double asymptotic_var_conf(const std::vector<double>& class_freqs, const ClassPrior& priors,
                           uint32_t target, uint64_t D) {
    const std::size_t C = class_freqs.size();
    if (C != priors.priors.size()) {
        throw std::invalid_argument("asymptotic_var_conf: frequency and prior vectors differ");
    }
    if (target >= C) throw std::invalid_argument("asymptotic_var_conf: target class out of range");
    if (D == 0) throw std::domain_error("asymptotic_var_conf: D must be at least 1");

    auto var_c = [&](std::size_t c) { return asymptotic_var_freq(class_freqs[c], D); };

    double p_s = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
        if (class_freqs[c] <= 0.0 || class_freqs[c] >= 1.0) {
            throw std::domain_error("asymptotic_var_conf: class frequencies must lie in (0,1)");
        }
        p_s += class_freqs[c] * priors.priors[c];
    }
    if (p_s <= 0.0) {
        throw std::domain_error("asymptotic_var_conf: zero weighted frequency");
    }

    const double pi_t = priors.priors[target];
    const double p_t = class_freqs[target];

    double sum = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
        sum += var_c(c) * priors.priors[c] * priors.priors[c];
    }
    const double a = p_t * pi_t / (p_s * p_s);
    const double term1 = a * a * sum;
    const double b = pi_t / (p_s * p_s);
    const double term2 = b * b * var_c(target) * p_s * (p_s - 2.0 * p_t * pi_t);
    return term1 + term2;
}

}  // namespace ric
