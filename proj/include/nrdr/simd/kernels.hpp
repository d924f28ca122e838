#pragma once

#include <cstddef>
#include <cstdint>

namespace nrdr::simd {

/// Vector primitives behind every hot loop in the library: distance
/// computations, smoother rows, sparse matvecs and the Lanczos
/// recurrences. Each entry has a scalar reference implementation and an
/// AVX2+FMA variant; the active set is picked once at startup from CPUID.
///
/// All implementations use a fixed accumulation order, so results are
/// reproducible run-to-run for a given build and machine.
struct KernelSet {
    /// sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    /// x[i] *= alpha
    void (*scale)(double* x, double alpha, std::size_t n);
    /// sum_i (a[i] - b[i])^2
    double (*sq_dist)(const double* a, const double* b, std::size_t n);
    /// sum_k vals[k] * x[idx[k]]   (one CSR row against a dense vector)
    double (*sparse_dot)(const double* vals, const std::int32_t* idx, std::size_t nnz,
                         const double* x);
    const char* name;
};

/// Active set, resolved on first use. Honors the NRDR_SIMD environment
/// variable ("scalar" or "avx2") as an override.
const KernelSet& kernels();

/// Reference implementation; always available.
const KernelSet& scalar_kernels();

/// AVX2 implementation, or nullptr when the build or CPU lacks support.
const KernelSet* avx2_kernels();

/// Force a specific set ("scalar"/"avx2"); throws nrdr::ParameterError on an
/// unknown or unavailable name. Intended for tests and the CLI.
void force_kernels(const char* name);

} // namespace nrdr::simd
