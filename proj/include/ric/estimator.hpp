#pragma once

#include <cstdint>
#include <vector>

#include "ric/chain.hpp"
#include "ric/dataset.hpp"
#include "ric/kernels.hpp"
#include "ric/pattern.hpp"

namespace ric {

// Censored-geometric frequency estimate from chain survivals:
// p_hat = K / (K + I) with K the summed survival depths and I the number
// of censored chains. Returns 0 when the pattern never survives past
// depth 0 (K = 0).
double frequency_from_stats(const SurvivalStats& st);
double frequency(const ChainSet& cs, const Pattern& s);

// Posterior class weight from per-class frequency estimates and priors:
// conf(c) = freq[c] * prior[c] / sum_c' freq[c'] * prior[c'].
// Throws std::domain_error when every product is zero.
double confidence(const std::vector<double>& freqs, const ClassPrior& priors, uint32_t target);

// Closed-form moments of one chain's survival depth k and censoring
// indicator chi for a pattern with true frequency p and chain length D.
// All require 0 <= p < 1 (p = 1 has no censoring and the estimator is
// undefined); D >= 1.
double expected_k(double p, uint64_t D);
double variance_k(double p, uint64_t D);
double mean_chi(double p, uint64_t D);
double variance_chi(double p, uint64_t D);
double cov_k_chi(double p, uint64_t D);

// Asymptotic variance of sqrt(M) * (p_hat - p); requires 0 < p < 1.
double asymptotic_var_freq(double p, uint64_t D);

// Asymptotic variance of sqrt(M) * (conf_hat - conf) for the target class
// when every class uses M chains of length D. class_freqs holds the true
// within-class frequencies.
double asymptotic_var_conf(const std::vector<double>& class_freqs, const ClassPrior& priors,
                           uint32_t target, uint64_t D);

}  // namespace ric
