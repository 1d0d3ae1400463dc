#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace fairfs {

// Row-major dense matrix of 64-bit floats. All model parameters, embedding
// blocks and gradients live in this type.
struct DenseMatrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(size_t r, size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(size_t r, size_t c) { return data[r * cols + c]; }
    double operator()(size_t r, size_t c) const { return data[r * cols + c]; }

    double* row(size_t r) { return data.data() + r * cols; }
    const double* row(size_t r) const { return data.data() + r * cols; }

    size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }

    void fill(double v);
    void zero() { fill(0.0); }
    bool same_shape(const DenseMatrix& other) const {
        return rows == other.rows && cols == other.cols;
    }
    bool all_finite() const;
};

// Throws NumericError naming `what` if any entry is non-finite.
void require_finite(const DenseMatrix& m, std::string_view what);
void require_finite(double v, std::string_view what);

} // namespace fairfs
