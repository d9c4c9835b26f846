#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ric/dataset.hpp"
#include "ric/pattern.hpp"
#include "ric/rng.hpp"

namespace ric {

// One intersection chain in compact form: the first sampled row (head),
// per-feature survival counts, and the number of intersection nodes
// actually realized. Node d of the chain is exactly
// { (j, head[j]) : counts[j] >= d }, so the two vectors plus the scalar
// reproduce every node without storing them.
struct Chain {
    std::vector<uint32_t> head;
    std::vector<uint64_t> counts;
    uint64_t realized_length = 0;
};

// Column-major batch of M chains over p features: entry (j, m) of each
// plane lives at j*M + m. The survival kernels stream one feature plane
// at a time across all chains.
struct ChainSet {
    std::string class_name;
    uint32_t p = 0;
    uint64_t M = 0;
    uint64_t D_max = 0;
    uint64_t K_stop = 0;
    std::vector<uint32_t> head_col;    // p * M
    std::vector<uint64_t> counts_col;  // p * M
    std::vector<uint64_t> realized;    // M

    Chain chain(uint64_t m) const;
    // Final node of chain m: items whose count equals the realized length.
    Pattern tail(uint64_t m) const;
};

// Grows one chain: start from a sampled row, then intersect with further
// same-class samples until the tail has at most K_stop items or D_max
// nodes exist. counts[j] increments only while item j is still alive.
Chain generate_chain(const EncodedDataset& ds, uint32_t class_code, uint64_t D_max,
                     uint64_t K_stop, RngState& rng);

// M chains with per-chain seeds derived from (master_seed, class, index),
// so output is identical for any thread count.
ChainSet generate_chains(const EncodedDataset& ds, uint32_t class_code, uint64_t M,
                         uint64_t D_max, uint64_t K_stop, uint64_t master_seed,
                         int threads = 1);

// Depth to which s survives in ch: min over items of the matching count
// (0 when the head disagrees). The empty pattern survives the whole chain.
uint64_t survival_depth(const Chain& ch, const Pattern& s);

void dump_chainset(const ChainSet& cs, std::ostream& out);
ChainSet load_chainset(std::istream& in);

}  // namespace ric
