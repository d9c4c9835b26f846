#include "ric/pattern.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace ric {

Pattern::Pattern(std::vector<Item> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end());
    for (std::size_t i = 1; i < items_.size(); ++i) {
        if (items_[i - 1].feature == items_[i].feature) {
            throw std::invalid_argument("pattern assigns feature " +
                                        std::to_string(items_[i].feature) + " twice");
        }
    }
}

Pattern Pattern::single(uint32_t feature, uint32_t code) {
    Pattern p;
    p.items_.push_back({feature, code});
    return p;
}

bool Pattern::code_for(uint32_t feature, uint32_t& code_out) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), Item{feature, 0},
                               [](const Item& a, const Item& b) { return a.feature < b.feature; });
    if (it == items_.end() || it->feature != feature) return false;
    code_out = it->code;
    return true;
}

bool is_subset(const Pattern& inner, const Pattern& outer) {
    return std::includes(outer.items().begin(), outer.items().end(),
                         inner.items().begin(), inner.items().end());
}

bool features_disjoint(const Pattern& a, const Pattern& b) {
    auto ia = a.items().begin(), ib = b.items().begin();
    while (ia != a.items().end() && ib != b.items().end()) {
        if (ia->feature == ib->feature) return false;
        if (ia->feature < ib->feature)
            ++ia;
        else
            ++ib;
    }
    return true;
}

Pattern intersect(const Pattern& a, const Pattern& b) {
    std::vector<Item> out;
    std::set_intersection(a.items().begin(), a.items().end(),
                          b.items().begin(), b.items().end(), std::back_inserter(out));
    return Pattern(std::move(out));
}

Pattern union_disjoint(const Pattern& a, const Pattern& b) {
    if (!features_disjoint(a, b)) {
        throw std::invalid_argument("union_disjoint: operands share a feature");
    }
    std::vector<Item> out;
    std::merge(a.items().begin(), a.items().end(),
               b.items().begin(), b.items().end(), std::back_inserter(out));
    return Pattern(std::move(out));
}

std::string format_pattern(const Pattern& p) {
    std::string out;
    for (const Item& it : p.items()) {
        if (!out.empty()) out += ',';
        out += 'f';
        out += std::to_string(it.feature);
        out += '=';
        out += std::to_string(it.code);
    }
    return out;
}

namespace {

uint32_t parse_u32(std::string_view s, std::string_view what) {
    uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("pattern parse: bad " + std::string(what) + " '" +
                                    std::string(s) + "'");
    }
    return v;
}

}  // namespace

Pattern parse_pattern(std::string_view text) {
    std::vector<Item> items;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view tok = text.substr(pos, end - pos);
        if (tok.empty() || tok[0] != 'f') {
            throw std::invalid_argument("pattern parse: bad item '" + std::string(tok) + "'");
        }
        std::size_t eq = tok.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("pattern parse: missing '=' in '" + std::string(tok) + "'");
        }
        items.push_back({parse_u32(tok.substr(1, eq - 1), "feature"),
                         parse_u32(tok.substr(eq + 1), "code")});
        pos = end + 1;
    }
    return Pattern(std::move(items));
}

std::size_t PatternHash::operator()(const Pattern& p) const {
    uint64_t h = 0xcbf29ce484222325ull;
    for (const Item& it : p.items()) {
        h ^= (static_cast<uint64_t>(it.feature) << 32) | it.code;
        h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
}

uint32_t PatternPool::id(const Pattern& p) {
    auto it = index_.find(p);
    if (it != index_.end()) return it->second;
    auto new_id = static_cast<uint32_t>(patterns_.size());
    patterns_.push_back(p);
    orders_.push_back(static_cast<uint32_t>(p.order()));
    index_.emplace(p, new_id);
    return new_id;
}

}  // namespace ric
