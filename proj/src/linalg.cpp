#include "nrdr/linalg.hpp"

#include <algorithm>
#include <cstring>

#include "nrdr/parallel.hpp"

namespace nrdr {

void CsrMatrix::apply(const double* x, double* y) const {
    const auto& k = simd::kernels();
    parallel_for(rows_, [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t i = b; i < e; ++i) {
            y[i] = k.sparse_dot(vals_.data() + rowptr_[i], colidx_.data() + rowptr_[i],
                                static_cast<std::size_t>(rowptr_[i + 1] - rowptr_[i]), x);
        }
    });
}

void CsrMatrix::apply_transpose(const double* x, double* y) const {
    std::memset(y, 0, sizeof(double) * cols_);
    for (int i = 0; i < rows_; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (std::int64_t p = rowptr_[i]; p < rowptr_[i + 1]; ++p) {
            y[colidx_[p]] += vals_[p] * xi;
        }
    }
}

RowMat CsrMatrix::to_dense() const {
    RowMat d(rows_, cols_);
    for (int i = 0; i < rows_; ++i) {
        for (std::int64_t p = rowptr_[i]; p < rowptr_[i + 1]; ++p) {
            d(i, colidx_[p]) = vals_[p];
        }
    }
    return d;
}

} // namespace nrdr
