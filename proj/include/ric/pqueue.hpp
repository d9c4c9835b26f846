#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ric {

// Bounded max-priority queue with deterministic tie handling: among equal
// keys the earliest-inserted entry ranks higher. A full queue admits a new
// entry only when it strictly beats the current minimum, which then gets
// evicted. Re-inserting a held value keeps its insertion rank and raises
// its key to the maximum seen.
//
// Storage is one vector sorted worst-to-best, so eviction pops the front
// region and extract_max pops the back. Capacities here are small (queue
// sizes in the hundreds), where the flat layout beats node-based heaps.
template <typename T>
class BoundedMaxQueue {
  public:
    struct Entry {
        T value{};
        double key = 0.0;
        uint64_t seq = 0;
    };

    struct InsertOutcome {
        bool added = false;    // value newly entered the queue
        bool updated = false;  // existing value had its key raised
        std::optional<T> evicted{};
    };

    explicit BoundedMaxQueue(std::size_t capacity) : capacity_(capacity) {}

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    InsertOutcome insert(const T& value, double key) {
        InsertOutcome out;
        auto it = find_value(value);
        if (it != entries_.end()) {
            if (key > it->key) {
                Entry e = *it;
                e.key = key;
                entries_.erase(it);
                entries_.insert(position_for(e), e);
                out.updated = true;
            }
            return out;
        }
        if (capacity_ == 0) return out;
        if (entries_.size() >= capacity_) {
            // A new entry always has the largest seq, so a key tie with
            // the minimum loses and the insert is rejected.
            if (key <= entries_.front().key) return out;
            out.evicted = std::move(entries_.front().value);
            entries_.erase(entries_.begin());
        }
        Entry e{value, key, next_seq_++};
        entries_.insert(position_for(e), std::move(e));
        out.added = true;
        return out;
    }

    Entry extract_max() {
        if (entries_.empty()) throw std::runtime_error("extract_max on empty queue");
        Entry e = std::move(entries_.back());
        entries_.pop_back();
        return e;
    }

    const Entry& peek_max() const {
        if (entries_.empty()) throw std::runtime_error("peek_max on empty queue");
        return entries_.back();
    }

    bool contains(const T& value) const {
        return const_cast<BoundedMaxQueue*>(this)->find_value(value) != entries_.end();
    }

    std::optional<double> key_of(const T& value) const {
        auto it = const_cast<BoundedMaxQueue*>(this)->find_value(value);
        if (it == entries_.end()) return std::nullopt;
        return it->key;
    }

    // Drops capacity by one and evicts the minimum if now over.
    std::optional<T> shrink() {
        if (capacity_ > 0) --capacity_;
        if (entries_.size() > capacity_) {
            std::optional<T> evicted = std::move(entries_.front().value);
            entries_.erase(entries_.begin());
            return evicted;
        }
        return std::nullopt;
    }

    // Entries worst-to-best (storage order).
    const std::vector<Entry>& entries() const { return entries_; }

    // Entries best-to-worst.
    std::vector<Entry> ordered() const {
        return std::vector<Entry>(entries_.rbegin(), entries_.rend());
    }

  private:
    static bool priority_less(const Entry& a, const Entry& b) {
        if (a.key != b.key) return a.key < b.key;
        return a.seq > b.seq;
    }

    typename std::vector<Entry>::iterator position_for(const Entry& e) {
        return std::lower_bound(entries_.begin(), entries_.end(), e, &priority_less);
    }

    typename std::vector<Entry>::iterator find_value(const T& value) {
        return std::find_if(entries_.begin(), entries_.end(),
                            [&](const Entry& e) { return e.value == value; });
    }

    std::size_t capacity_;
    uint64_t next_seq_ = 0;
    std::vector<Entry> entries_;
};

}  // namespace ric
