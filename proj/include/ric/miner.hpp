#pragma once

#include <cstdint>
#include <vector>

#include "ric/chain.hpp"
#include "ric/dataset.hpp"
#include "ric/pattern.hpp"
#include "ric/subset_select.hpp"

namespace ric {

enum class MineMode { naive, queue };

struct MinerConfig {
    MineMode mode = MineMode::queue;
    uint64_t chains = 1000;     // chains per class
    uint64_t max_len = 100000;  // maximum chain length
    uint64_t k_stop = 4;        // stop once the tail has at most this many items
    std::size_t d_freq = 400;   // frequent-pattern queue capacity (queue mode)
    std::size_t d_conf = 10;    // confident-rule queue capacity (queue mode)
    double xi = 0.5;            // confidence floor (naive mode)
    uint64_t master_seed = 0;
    int threads = 1;
};

struct ScoredRule {
    Pattern pattern;
    uint32_t target_class = 0;
    std::vector<double> freq_per_class;  // estimated within-class frequencies
    double confidence = 0.0;
    double support_estimate = 0.0;  // prior-weighted overall frequency
};

using RuleList = std::vector<ScoredRule>;
using RuleSet = std::vector<RuleList>;  // indexed by class code

// Queue mode: per class, estimate frequencies from chains, keep the
// d_freq most frequent patterns closed under pairwise unions, then keep
// the d_conf most confident of those. Output per class is ordered by
// confidence, earliest-discovered first on ties.
RuleSet mine_queue(const EncodedDataset& ds, const MinerConfig& cfg);

// Naive mode: enumerate every nonempty subset of every tail (refused when
// a tail has more than 20 items) and keep rules with confidence >= xi,
// ordered by confidence then canonical pattern order.
RuleSet mine_naive(const EncodedDataset& ds, const MinerConfig& cfg);

struct PlanInputs {
    double p1 = 0;  // frequency that should be retained
    double p2 = 0;  // frequency that should be rejected (p2 < p1)
    double eta1 = 0;  // acceptable miss rate for p1 patterns
    double eta2 = 0;  // acceptable hit rate for p2 patterns
};

struct PlanResult {
    uint64_t D_star = 0;
    uint64_t M_star = 0;
};

// Smallest chain length and count meeting both error targets.
PlanResult plan_parameters(const PlanInputs& in);

struct GuaranteeResult {
    PlanResult plan;
    double hit_rate_frequent = 0;    // fraction of trials where the p1 item reached a tail
    double hit_rate_infrequent = 0;  // same for the p2 item
};

// Monte Carlo check of the planner on a planted two-item dataset of 1000
// rows (frequencies rounded to the nearest 1/1000).
GuaranteeResult guarantee_simulation(double p1, double p2, double eta1, double eta2,
                                     uint64_t trials, uint64_t master_seed);

}  // namespace ric
