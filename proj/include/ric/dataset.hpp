#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ric/pattern.hpp"
#include "ric/rng.hpp"

namespace ric {

// Fully categorical table with integer codes per feature. Codes are dense
// (0..cardinality-1) and assigned by first appearance in the source file.
struct EncodedDataset {
    uint32_t p = 0;
    std::vector<uint32_t> codes;    // row-major, n_rows x p
    std::vector<uint32_t> labels;   // class code per row
    std::vector<std::string> class_names;
    std::vector<std::vector<uint32_t>> class_index;  // ascending row ids per class
    std::vector<uint32_t> cardinalities;
    std::vector<std::string> feature_names;
    std::vector<std::vector<std::string>> category_names;  // per feature, by code
    std::string label_name;

    std::size_t n_rows() const { return labels.size(); }
    const uint32_t* row(std::size_t i) const { return codes.data() + i * p; }
    bool row_contains(std::size_t i, const Pattern& s) const;
    Pattern row_pattern(std::size_t i) const;

    // Lookups by name; throw std::invalid_argument when absent.
    uint32_t class_code(std::string_view name) const;
    uint32_t feature_index(std::string_view name) const;
    uint32_t category_code(uint32_t feature, std::string_view name) const;
};

struct ClassPrior {
    std::vector<double> priors;  // by class code, sums to 1
};
ClassPrior class_priors(const EncodedDataset& ds);

// Numeric column to bin: requested bin count before capping.
struct BinSpec {
    std::string column;
    uint32_t n_bins = 0;
};

struct BinResult {
    std::vector<uint32_t> codes;
    uint32_t effective_bins = 0;  // distinct bins actually used
};

// Equal-frequency binning by rank; ties share the rank of their first
// occurrence in sort order, so equal values always land in the same bin.
// Fewer distinct values than bins reduces the bin count, reported in
// effective_bins.
BinResult bin_numeric(const std::vector<double>& values, uint32_t n_bins);

// Reads a CSV with a header row. Every non-label column becomes a
// categorical feature unless listed in `bins`, in which case it is parsed
// as numeric and binned. With uncommon_threshold > 0, categories occurring
// fewer than that many times are merged into a trailing "others" code;
// 0 disables merging.
EncodedDataset ingest_csv(const std::string& path, const std::string& label_column,
                          uint32_t uncommon_threshold = 0,
                          const std::vector<BinSpec>& bins = {});
EncodedDataset ingest_csv_text(std::string_view text, const std::string& label_column,
                               uint32_t uncommon_threshold = 0,
                               const std::vector<BinSpec>& bins = {});

// Code-level serialization. emit_encoded writes integer codes with the
// label as the last column; ingest_encoded reads the codes back verbatim
// (no re-encoding), so a round trip reproduces the table exactly.
std::string emit_encoded(const EncodedDataset& ds);
EncodedDataset ingest_encoded(std::string_view text);

// Uniform draw from the rows of one class; throws on empty class.
uint32_t sample_row(const EncodedDataset& ds, uint32_t class_code, RngState& rng);

}  // namespace ric
