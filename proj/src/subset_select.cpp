#include "ric/subset_select.hpp"

#include <algorithm>
#include <cmath>

#include "ric/estimator.hpp"

namespace ric {

double ChainFrequencySource::frequency(const Pattern& s) const {
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    double f = ric::frequency(*cs_, s);
    memo_.emplace(s, f);
    return f;
}

void insert_freq_subsets(BoundedMaxQueue<Pattern>& queue, const Pattern& s,
                         const FrequencySource& freq, uint64_t& eval_counter) {
    for (const Item& it : s.items()) {
        Pattern single = Pattern::single(it.feature, it.code);
        ++eval_counter;
        queue.insert(single, freq.frequency(single));
    }
    for (std::size_t k = 2; k <= s.order(); ++k) {
        BoundedMaxQueue<Pattern> A = queue;
        while (A.size() > 1) {
            auto ea = A.extract_max();
            A.shrink();
            const Pattern& a = ea.value;
            if (a.order() != 1 || !queue.contains(a)) continue;
            BoundedMaxQueue<Pattern> B = A;
            while (!B.empty()) {
                auto eb = B.extract_max();
                B.shrink();
                const Pattern& b = eb.value;
                if (b.order() != k - 1 || !queue.contains(b) || !features_disjoint(a, b)) {
                    continue;
                }
                Pattern u = union_disjoint(a, b);
                ++eval_counter;
                const double f = freq.frequency(u);
                queue.insert(u, f);
                A.insert(u, f);
                B.insert(u, f);
            }
        }
    }
}

void insert_freq_subsets(BoundedMaxQueue<Pattern>& queue, const Pattern& s, const ChainSet& cs,
                         uint64_t& eval_counter) {
    ChainFrequencySource src(cs);
    insert_freq_subsets(queue, s, src, eval_counter);
}

namespace {

// Interned mirror of insert_freq_subsets over the whole tail stream.
// Patterns live in a pool and move through the queues as ids; frequencies
// are cached per id and per (singleton, partner) pair.
class ClosureRunner {
  public:
    ClosureRunner(const FrequencySource& freq, std::size_t d_freq)
        : freq_(freq), S_(d_freq) {}

    void feed(const Pattern& s) {
        for (const Item& it : s.items()) {
            const uint32_t id = intern(Pattern::single(it.feature, it.code));
            apply(id, S_.insert(id, freq_of(id)));
        }
        for (std::size_t k = 2; k <= s.order(); ++k) {
            run_order(k);
        }
    }

    // Replays surviving entries in insertion order so seq-based tie ranks
    // carry over to the pattern-valued queue.
    BoundedMaxQueue<Pattern> result() const {
        auto entries = S_.entries();
        std::sort(entries.begin(), entries.end(),
                  [](const auto& x, const auto& y) { return x.seq < y.seq; });
        BoundedMaxQueue<Pattern> out(S_.capacity());
        for (const auto& e : entries) out.insert(pool_.at(e.value), e.key);
        return out;
    }

  private:
    // No-op elision: a completed pass for order k is recorded with the
    // queue version at completion. Re-running order k on an unchanged
    // queue enumerates a subset of the candidates already offered (all
    // with cached keys), so it cannot change anything and is skipped.
    void run_order(std::size_t k) {
        if (k >= last_run_.size()) last_run_.resize(k + 1, kNever);
        if (last_run_[k] == version_) return;

        BoundedMaxQueue<uint32_t> A = S_;
        while (A.size() > 1) {
            auto ea = A.extract_max();
            A.shrink();
            const uint32_t a = ea.value;
            if (pool_.order_of(a) != 1 || !member(a)) continue;
            const Item a_item = pool_.at(a).items()[0];
            BoundedMaxQueue<uint32_t> B = A;
            while (!B.empty()) {
                auto eb = B.extract_max();
                B.shrink();
                const uint32_t b = eb.value;
                if (pool_.order_of(b) != k - 1 || !member(b)) continue;
                uint32_t held_code = 0;
                if (pool_.at(b).code_for(a_item.feature, held_code)) continue;
                const auto [u, f] = union_freq(a, b);
                apply(u, S_.insert(u, f));
                A.insert(u, f);
                B.insert(u, f);
            }
        }
        last_run_[k] = version_;
    }

    uint32_t intern(const Pattern& p) {
        const uint32_t id = pool_.id(p);
        if (id >= freq_cache_.size()) {
            freq_cache_.resize(id + 1, std::nan(""));
            in_S_.resize(id + 1, 0);
        }
        return id;
    }

    double freq_of(uint32_t id) {
        if (std::isnan(freq_cache_[id])) freq_cache_[id] = freq_.frequency(pool_.at(id));
        return freq_cache_[id];
    }

    bool member(uint32_t id) const { return in_S_[id] != 0; }

    void apply(uint32_t id, const BoundedMaxQueue<uint32_t>::InsertOutcome& out) {
        if (out.added) {
            in_S_[id] = 1;
            if (out.evicted) in_S_[*out.evicted] = 0;
            ++version_;
        } else if (out.updated) {
            ++version_;
        }
    }

    std::pair<uint32_t, double> union_freq(uint32_t a, uint32_t b) {
        const uint64_t key = (static_cast<uint64_t>(a) << 32) | b;
        auto it = pair_memo_.find(key);
        if (it != pair_memo_.end()) return it->second;
        const uint32_t u = intern(union_disjoint(pool_.at(a), pool_.at(b)));
        const double f = freq_of(u);
        auto res = std::make_pair(u, f);
        pair_memo_.emplace(key, res);
        return res;
    }

    static constexpr uint64_t kNever = UINT64_MAX;

    const FrequencySource& freq_;
    BoundedMaxQueue<uint32_t> S_;
    PatternPool pool_;
    std::vector<double> freq_cache_;
    std::vector<uint8_t> in_S_;
    std::unordered_map<uint64_t, std::pair<uint32_t, double>> pair_memo_;
    std::vector<uint64_t> last_run_;
    uint64_t version_ = 0;
};

}  // namespace

BoundedMaxQueue<Pattern> top_frequent_closure(const std::vector<Pattern>& tails,
                                              const FrequencySource& freq, std::size_t d_freq) {
    ClosureRunner runner(freq, d_freq);
    for (const Pattern& t : tails) runner.feed(t);
    return runner.result();
}

BoundedMaxQueue<Pattern> top_frequent_closure(const std::vector<Pattern>& tails,
                                              const ChainSet& cs, std::size_t d_freq) {
    ChainFrequencySource src(cs);
    return top_frequent_closure(tails, src, d_freq);
}

}  // namespace ric
