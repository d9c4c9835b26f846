#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ric {

// One (feature, category) assignment.
struct Item {
    uint32_t feature = 0;
    uint32_t code = 0;
    friend auto operator<=>(const Item&, const Item&) = default;
};

// Immutable set of items with distinct features, kept sorted by feature
// index. Two equal patterns always have byte-identical item sequences,
// so formatting and hashing are canonical.
class Pattern {
  public:
    Pattern() = default;
    explicit Pattern(std::vector<Item> items);

    static Pattern single(uint32_t feature, uint32_t code);

    const std::vector<Item>& items() const { return items_; }
    std::size_t order() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

    // True if this pattern fixes `feature`, and if so to which code.
    bool code_for(uint32_t feature, uint32_t& code_out) const;

    friend bool operator==(const Pattern&, const Pattern&) = default;
    friend auto operator<=>(const Pattern&, const Pattern&) = default;

  private:
    std::vector<Item> items_;
};

bool is_subset(const Pattern& inner, const Pattern& outer);
bool features_disjoint(const Pattern& a, const Pattern& b);
Pattern intersect(const Pattern& a, const Pattern& b);

// Union of two patterns on disjoint feature sets; throws
// std::invalid_argument when a feature appears on both sides.
Pattern union_disjoint(const Pattern& a, const Pattern& b);

// "f3=2,f7=0" with items in canonical order; empty pattern formats as "".
std::string format_pattern(const Pattern& p);
Pattern parse_pattern(std::string_view text);

struct PatternHash {
    std::size_t operator()(const Pattern& p) const;
};

// Interns patterns so hot paths can work with dense uint32 ids.
class PatternPool {
  public:
    uint32_t id(const Pattern& p);
    const Pattern& at(uint32_t id) const { return patterns_[id]; }
    uint32_t order_of(uint32_t id) const { return orders_[id]; }
    std::size_t size() const { return patterns_.size(); }

  private:
    std::vector<Pattern> patterns_;
    std::vector<uint32_t> orders_;
    std::unordered_map<Pattern, uint32_t, PatternHash> index_;
};

}  // namespace ric
