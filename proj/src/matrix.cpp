#include "fairfs/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairfs/errors.hpp"

namespace fairfs {

void DenseMatrix::fill(double v) {
    std::fill(data.begin(), data.end(), v);
}

bool DenseMatrix::all_finite() const {
    for (const double v : data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void require_finite(const DenseMatrix& m, std::string_view what) {
    if (!m.all_finite()) {
        throw NumericError("non-finite value in " + std::string(what));
    }
}

void require_finite(double v, std::string_view what) {
    if (!std::isfinite(v)) {
        throw NumericError("non-finite value in " + std::string(what));
    }
}

} // namespace fairfs
