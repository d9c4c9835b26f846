#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ric/dataset.hpp"
#include "ric/miner.hpp"
#include "ric/pattern.hpp"

namespace ric {

// Exact full-scan counterparts of the chain-based estimates. These are
// the reference every sampled quantity is checked against, so they stay
// deliberately simple: plain row scans, no sampling, no shortcuts.

struct ExactStats {
    uint64_t support_count = 0;
    std::vector<uint64_t> class_count;  // by class code
};

ExactStats exact_stats(const EncodedDataset& ds, const Pattern& s);
double exact_frequency(const EncodedDataset& ds, const Pattern& s, uint32_t class_code);

// P(class = target | row contains s); throws std::domain_error when no
// row contains s.
double exact_confidence(const EncodedDataset& ds, const Pattern& s, uint32_t target);

// All 2^|s|-1 nonempty subsets of s scored by freq, top k returned.
// Ties keep enumeration order (ascending submask value). |s| <= 20.
std::vector<std::pair<Pattern, double>> brute_force_topk_subsets(
    const std::function<double(const Pattern&)>& freq, const Pattern& s, std::size_t k);

struct ExactPattern {
    Pattern pattern;
    ExactStats stats;
};

// Level-wise enumeration of every pattern with support_count >= min_support
// and order <= max_order, in (order, discovery) order. Refuses tables
// beyond 100000 rows or 30 features.
std::vector<ExactPattern> exact_miner(const EncodedDataset& ds, double min_support,
                                      uint32_t max_order);

struct RuleCheck {
    const ScoredRule* rule = nullptr;
    double exact_freq_target = 0;           // exact within-class frequency
    std::optional<double> exact_conf{};     // empty when the pattern has no support
};

struct EvalReport {
    std::vector<RuleCheck> rules;
    double rmse_freq = 0;
    std::optional<double> rmse_conf{};
    std::optional<double> pearson_freq{};  // empty below 3 points or at zero variance
    std::optional<double> pearson_conf{};
    std::size_t undefined_conf_count = 0;
};

EvalReport evaluate(const RuleSet& rules, const EncodedDataset& ds);

// Overlap of two outputs as sets of (class, pattern); 1 when both empty.
double jaccard(const RuleSet& a, const RuleSet& b);

}  // namespace ric
