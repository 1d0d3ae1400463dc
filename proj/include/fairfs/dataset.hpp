#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairfs/schema.hpp"

namespace fairfs {

struct Provenance {
    std::string source;
    uint64_t seed = 0;
    std::vector<size_t> planted; // ground-truth informative fields, if known
};

// Encoded categorical rows with binary labels. Index 0 of every field is the
// reserved out-of-vocabulary slot.
struct TabularDataset {
    FieldSchema schema;
    std::vector<uint32_t> indices; // row_count x field_count, row-major
    std::vector<uint8_t> labels;
    Provenance provenance;
    // Per-field category strings (index -> value) for CSV-loaded data;
    // empty for synthetic datasets.
    std::vector<std::vector<std::string>> vocab;

    size_t row_count() const { return labels.size(); }
    size_t field_count() const { return schema.field_count(); }
    uint32_t index(size_t row, size_t field) const {
        return indices[row * schema.field_count() + field];
    }
    double positive_rate() const;

    // Dataset restricted to the given fields (ascending original order).
    TabularDataset select_fields(const std::vector<size_t>& fields) const;

    void validate() const;
};

struct SplitResult {
    TabularDataset train;
    TabularDataset validation;
    TabularDataset test;
};

// CSV ingestion. The file must have a header row and a 0/1 label column.
// Vocabularies are built in first-appearance order. Without a split seed the
// whole file counts as the training portion; with one, vocabulary is built
// only from the rows that split_dataset(data, split_seed) will assign to
// train, so held-out rows exercise the OOV path realistically.
TabularDataset load_csv(const std::string& path, const std::string& label_column);
TabularDataset load_csv(const std::string& path, const std::string& label_column,
                        uint64_t split_seed);

// Seeded uniform shuffle followed by a contiguous 80/10/10 cut:
// train = floor(0.8 n), validation = floor(0.1 n), test = remainder.
SplitResult split_dataset(const TabularDataset& data, uint64_t seed);

struct SyntheticSpec {
    size_t n_rows = 0;
    size_t n_fields = 0;
    std::vector<size_t> planted; // fields that enter the label expression
    size_t vocab_size = 0;       // per field, including the reserved index 0
    double target_positive_rate = 0.5;
    std::vector<std::pair<size_t, size_t>> interaction_pairs;
    uint64_t seed = 1;
    size_t embed_dim = 8;

    void validate() const;
};

// Planted-ground-truth generator: category indices are uniform, the label is
// Bernoulli(sigmoid(b0 + planted main effects + pair effects)) with N(0,1)
// per-category weights, and b0 is solved by bisection until the empirical
// positive rate is within +-2% of target.
TabularDataset generate_synthetic(const SyntheticSpec& spec);

// Raw label-expression scores (without b0) for the given index matrix; only
// planted fields and interaction pairs contribute.
std::vector<double> synthetic_raw_scores(const SyntheticSpec& spec,
                                         const std::vector<uint32_t>& indices);

// Versioned binary snapshot of an encoded dataset.
void save_dataset(const TabularDataset& data, const std::string& path);
TabularDataset load_dataset(const std::string& path);

} // namespace fairfs
