#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ric/chain.hpp"
#include "ric/kernels.hpp"
#include "ric/pattern.hpp"
#include "ric/pqueue.hpp"

namespace ric {

// Where subset frequencies come from. The mining path estimates them from
// chains; tests substitute exact table scans.
class FrequencySource {
  public:
    virtual ~FrequencySource() = default;
    virtual double frequency(const Pattern& s) const = 0;
};

// Chain-based estimates with memoization, so repeated lookups of the same
// pattern cost one kernel pass total.
class ChainFrequencySource final : public FrequencySource {
  public:
    explicit ChainFrequencySource(const ChainSet& cs) : cs_(&cs) {}
    double frequency(const Pattern& s) const override;

  private:
    const ChainSet* cs_;
    mutable std::unordered_map<Pattern, double, PatternHash> memo_;
};

// Feeds every subset of s reachable by pairwise disjoint unions into the
// queue: first the singletons of s, then, order by order, unions of a
// held singleton with a held (k-1)-pattern, working over snapshots of the
// queue so the enumeration order is deterministic. eval_counter grows by
// one per frequency request.
void insert_freq_subsets(BoundedMaxQueue<Pattern>& queue, const Pattern& s,
                         const FrequencySource& freq, uint64_t& eval_counter);

// Convenience form estimating frequencies straight off a chain set.
void insert_freq_subsets(BoundedMaxQueue<Pattern>& queue, const Pattern& s, const ChainSet& cs,
                         uint64_t& eval_counter);

// Top-d_freq patterns over all tails by estimated frequency: semantically
// identical to running insert_freq_subsets over the tails in chain order
// on one shared queue, but interned and memoized, and tails that cannot
// change the queue are skipped outright.
BoundedMaxQueue<Pattern> top_frequent_closure(const std::vector<Pattern>& tails,
                                              const FrequencySource& freq, std::size_t d_freq);
BoundedMaxQueue<Pattern> top_frequent_closure(const std::vector<Pattern>& tails,
                                              const ChainSet& cs, std::size_t d_freq);

}  // namespace ric
