#include "ric/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ric {

namespace {

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            out.emplace_back(line.substr(pos));
            return out;
        }
        out.emplace_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
}

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

RawTable parse_csv(std::string_view text) {
    RawTable t;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (t.header.empty()) {
            t.header = std::move(fields);
        } else {
            if (fields.size() != t.header.size()) {
                throw std::runtime_error("csv line " + std::to_string(line_no) + " has " +
                                         std::to_string(fields.size()) + " fields, expected " +
                                         std::to_string(t.header.size()));
            }
            t.rows.push_back(std::move(fields));
        }
    }
    if (t.header.empty()) throw std::runtime_error("csv input has no header row");
    if (t.rows.empty()) throw std::runtime_error("csv input has no data rows");
    return t;
}

double parse_double(const std::string& s, const std::string& where) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw std::runtime_error("cannot parse numeric value '" + s + "' at " + where);
    }
    return v;
}

void finalize_index(EncodedDataset& ds) {
    ds.class_index.assign(ds.class_names.size(), {});
    for (std::size_t i = 0; i < ds.labels.size(); ++i) {
        ds.class_index[ds.labels[i]].push_back(static_cast<uint32_t>(i));
    }
}

}  // namespace

bool EncodedDataset::row_contains(std::size_t i, const Pattern& s) const {
    const uint32_t* r = row(i);
    for (const Item& it : s.items()) {
        if (r[it.feature] != it.code) return false;
    }
    return true;
}

Pattern EncodedDataset::row_pattern(std::size_t i) const {
    std::vector<Item> items;
    items.reserve(p);
    const uint32_t* r = row(i);
    for (uint32_t j = 0; j < p; ++j) items.push_back({j, r[j]});
    return Pattern(std::move(items));
}

uint32_t EncodedDataset::class_code(std::string_view name) const {
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        if (class_names[c] == name) return static_cast<uint32_t>(c);
    }
    throw std::invalid_argument("unknown class '" + std::string(name) + "'");
}

uint32_t EncodedDataset::feature_index(std::string_view name) const {
    for (std::size_t j = 0; j < feature_names.size(); ++j) {
        if (feature_names[j] == name) return static_cast<uint32_t>(j);
    }
    throw std::invalid_argument("unknown feature '" + std::string(name) + "'");
}

uint32_t EncodedDataset::category_code(uint32_t feature, std::string_view name) const {
    const auto& cats = category_names.at(feature);
    for (std::size_t c = 0; c < cats.size(); ++c) {
        if (cats[c] == name) return static_cast<uint32_t>(c);
    }
    throw std::invalid_argument("unknown category '" + std::string(name) + "' for feature '" +
                                feature_names.at(feature) + "'");
}

ClassPrior class_priors(const EncodedDataset& ds) {
    if (ds.n_rows() == 0) throw std::runtime_error("dataset has no rows");
    ClassPrior pr;
    pr.priors.resize(ds.class_names.size());
    for (std::size_t c = 0; c < ds.class_index.size(); ++c) {
        pr.priors[c] = static_cast<double>(ds.class_index[c].size()) /
                       static_cast<double>(ds.n_rows());
    }
    return pr;
}

BinResult bin_numeric(const std::vector<double>& values, uint32_t n_bins) {
    if (values.empty()) throw std::invalid_argument("bin_numeric: empty input");
    if (n_bins < 2) throw std::invalid_argument("bin_numeric: need at least 2 bins");
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("bin_numeric: non-finite value");
    }
    const std::size_t n = values.size();
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](uint32_t a, uint32_t b) { return values[a] < values[b]; });

    // Rank of the first occurrence of each value in sort order.
    std::vector<std::size_t> first_rank(n);
    for (std::size_t r = 0; r < n; ++r) {
        first_rank[order[r]] =
            (r > 0 && values[order[r]] == values[order[r - 1]]) ? first_rank[order[r - 1]] : r;
    }

    std::vector<uint32_t> raw(n);
    for (std::size_t i = 0; i < n; ++i) {
        raw[i] = static_cast<uint32_t>(first_rank[i] * n_bins / n);
    }

    // Compact to dense codes; gaps appear when values repeat.
    std::vector<uint32_t> used = raw;
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    std::vector<uint32_t> remap(used.back() + 1, 0);
    for (std::size_t k = 0; k < used.size(); ++k) remap[used[k]] = static_cast<uint32_t>(k);

    BinResult out;
    out.codes.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.codes[i] = remap[raw[i]];
    out.effective_bins = static_cast<uint32_t>(used.size());
    return out;
}

EncodedDataset ingest_csv_text(std::string_view text, const std::string& label_column,
                               uint32_t uncommon_threshold, const std::vector<BinSpec>& bins) {
    RawTable t = parse_csv(text);

    std::size_t label_idx = t.header.size();
    for (std::size_t j = 0; j < t.header.size(); ++j) {
        if (t.header[j] == label_column) {
            label_idx = j;
            break;
        }
    }
    if (label_idx == t.header.size()) {
        throw std::runtime_error("label column '" + label_column + "' not found in header");
    }

    std::unordered_map<std::string, uint32_t> bin_request;
    for (const BinSpec& b : bins) {
        if (b.column == label_column) {
            throw std::runtime_error("cannot bin the label column '" + b.column + "'");
        }
        if (b.n_bins < 2) {
            throw std::runtime_error("bin request for '" + b.column + "' needs at least 2 bins");
        }
        bool found = false;
        for (const auto& h : t.header) found = found || h == b.column;
        if (!found) throw std::runtime_error("bin column '" + b.column + "' not found in header");
        bin_request[b.column] = b.n_bins;
    }

    EncodedDataset ds;
    ds.label_name = t.header[label_idx];
    for (std::size_t j = 0; j < t.header.size(); ++j) {
        if (j != label_idx) ds.feature_names.push_back(t.header[j]);
    }
    ds.p = static_cast<uint32_t>(ds.feature_names.size());
    if (ds.p == 0) throw std::runtime_error("csv input has no feature columns");

    const std::size_t n = t.rows.size();
    ds.codes.resize(n * ds.p);
    ds.cardinalities.resize(ds.p);
    ds.category_names.resize(ds.p);

    std::size_t out_j = 0;
    for (std::size_t j = 0; j < t.header.size(); ++j) {
        if (j == label_idx) continue;
        const std::string& name = t.header[j];
        auto bin_it = bin_request.find(name);
        if (bin_it != bin_request.end()) {
            std::vector<double> vals(n);
            for (std::size_t i = 0; i < n; ++i) {
                vals[i] = parse_double(t.rows[i][j], "row " + std::to_string(i + 1) +
                                                        ", column '" + name + "'");
            }
            BinResult br = bin_numeric(vals, bin_it->second);
            for (std::size_t i = 0; i < n; ++i) ds.codes[i * ds.p + out_j] = br.codes[i];
            ds.cardinalities[out_j] = br.effective_bins;
            for (uint32_t b = 0; b < br.effective_bins; ++b) {
                ds.category_names[out_j].push_back("bin" + std::to_string(b));
            }
        } else {
            // First pass: categories in order of first appearance, with counts.
            std::unordered_map<std::string, uint32_t> seen;
            std::vector<std::string> cats;
            std::vector<uint32_t> counts;
            std::vector<uint32_t> raw(n);
            for (std::size_t i = 0; i < n; ++i) {
                const std::string& v = t.rows[i][j];
                auto [it, inserted] = seen.emplace(v, static_cast<uint32_t>(cats.size()));
                if (inserted) {
                    cats.push_back(v);
                    counts.push_back(0);
                }
                raw[i] = it->second;
                ++counts[it->second];
            }
            // Categories below the threshold collapse into one trailing code.
            std::vector<uint32_t> remap(cats.size());
            std::vector<std::string> kept;
            bool any_merged = false;
            for (std::size_t c = 0; c < cats.size(); ++c) {
                if (uncommon_threshold > 0 && counts[c] < uncommon_threshold) {
                    any_merged = true;
                } else {
                    remap[c] = static_cast<uint32_t>(kept.size());
                    kept.push_back(cats[c]);
                }
            }
            if (any_merged) {
                auto others = static_cast<uint32_t>(kept.size());
                for (std::size_t c = 0; c < cats.size(); ++c) {
                    if (uncommon_threshold > 0 && counts[c] < uncommon_threshold) {
                        remap[c] = others;
                    }
                }
                kept.push_back("others");
            }
            for (std::size_t i = 0; i < n; ++i) ds.codes[i * ds.p + out_j] = remap[raw[i]];
            ds.cardinalities[out_j] = static_cast<uint32_t>(kept.size());
            ds.category_names[out_j] = std::move(kept);
        }
        ++out_j;
    }

    std::unordered_map<std::string, uint32_t> class_seen;
    ds.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& v = t.rows[i][label_idx];
        auto [it, inserted] = class_seen.emplace(v, static_cast<uint32_t>(ds.class_names.size()));
        if (inserted) ds.class_names.push_back(v);
        ds.labels[i] = it->second;
    }
    finalize_index(ds);
    return ds;
}

EncodedDataset ingest_csv(const std::string& path, const std::string& label_column,
                          uint32_t uncommon_threshold, const std::vector<BinSpec>& bins) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return ingest_csv_text(buf.str(), label_column, uncommon_threshold, bins);
}

std::string emit_encoded(const EncodedDataset& ds) {
    std::string out;
    for (uint32_t j = 0; j < ds.p; ++j) {
        out += ds.feature_names[j];
        out += ',';
    }
    out += ds.label_name.empty() ? std::string("class") : ds.label_name;
    out += '\n';
    for (std::size_t i = 0; i < ds.n_rows(); ++i) {
        const uint32_t* r = ds.row(i);
        for (uint32_t j = 0; j < ds.p; ++j) {
            out += std::to_string(r[j]);
            out += ',';
        }
        out += ds.class_names[ds.labels[i]];
        out += '\n';
    }
    return out;
}

EncodedDataset ingest_encoded(std::string_view text) {
    RawTable t = parse_csv(text);
    EncodedDataset ds;
    ds.label_name = t.header.back();
    for (std::size_t j = 0; j + 1 < t.header.size(); ++j) ds.feature_names.push_back(t.header[j]);
    ds.p = static_cast<uint32_t>(ds.feature_names.size());
    if (ds.p == 0) throw std::runtime_error("encoded input has no feature columns");

    const std::size_t n = t.rows.size();
    ds.codes.resize(n * ds.p);
    ds.cardinalities.assign(ds.p, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (uint32_t j = 0; j < ds.p; ++j) {
            const std::string& s = t.rows[i][j];
            uint32_t v = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || ptr != s.data() + s.size()) {
                throw std::runtime_error("encoded input: bad code '" + s + "' at row " +
                                         std::to_string(i + 1) + ", column '" +
                                         ds.feature_names[j] + "'");
            }
            ds.codes[i * ds.p + j] = v;
            ds.cardinalities[j] = std::max(ds.cardinalities[j], v + 1);
        }
    }
    ds.category_names.resize(ds.p);
    for (uint32_t j = 0; j < ds.p; ++j) {
        for (uint32_t c = 0; c < ds.cardinalities[j]; ++c) {
            ds.category_names[j].push_back(std::to_string(c));
        }
    }
    std::unordered_map<std::string, uint32_t> class_seen;
    ds.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& v = t.rows[i].back();
        auto [it, inserted] = class_seen.emplace(v, static_cast<uint32_t>(ds.class_names.size()));
        if (inserted) ds.class_names.push_back(v);
        ds.labels[i] = it->second;
    }
    finalize_index(ds);
    return ds;
}

uint32_t sample_row(const EncodedDataset& ds, uint32_t class_code, RngState& rng) {
    if (class_code >= ds.class_index.size()) {
        throw std::invalid_argument("class code " + std::to_string(class_code) + " out of range");
    }
    const auto& rows = ds.class_index[class_code];
    if (rows.empty()) {
        throw std::runtime_error("class '" + ds.class_names[class_code] + "' has no rows");
    }
    return rows[next_below(rng, rows.size())];
}

}  // namespace ric
