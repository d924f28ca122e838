#include "nrdr/simd/kernels.hpp"

namespace nrdr::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double* x, double alpha, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double sq_dist_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double sparse_dot_scalar(const double* vals, const std::int32_t* idx, std::size_t nnz,
                         const double* x) {
    double s = 0.0;
    for (std::size_t k = 0; k < nnz; ++k) s += vals[k] * x[idx[k]];
    return s;
}

} // namespace

const KernelSet& scalar_kernels() {
    static const KernelSet set{dot_scalar, axpy_scalar, scale_scalar,
                               sq_dist_scalar, sparse_dot_scalar, "scalar"};
    return set;
}

} // namespace nrdr::simd
