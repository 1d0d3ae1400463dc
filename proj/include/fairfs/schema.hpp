#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fairfs {

struct FieldInfo {
    std::string name;
    size_t vocab_size = 0; // includes the reserved out-of-vocabulary index 0
};

// Ordered categorical feature fields plus the shared embedding width.
struct FieldSchema {
    std::vector<FieldInfo> fields;
    size_t embed_dim = 8;

    size_t field_count() const { return fields.size(); }
    size_t input_width() const { return fields.size() * embed_dim; }

    // Throws DataError on duplicate names, empty vocabularies or zero width.
    void validate() const;
};

} // namespace fairfs
