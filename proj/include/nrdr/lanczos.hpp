#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nrdr/linalg.hpp"

namespace nrdr {

/// A symmetric linear map applied implicitly.
struct SymmetricOp {
    int n = 0;
    std::function<void(const double*, double*)> apply_fn;

    void apply(const double* x, double* y) const { apply_fn(x, y); }

    /// max over random probe pairs of |x'(Ay) - y'(Ax)| / (|x||y|),
    /// normalized by an operator-norm estimate from the probes.
    double symmetry_defect(int probes, std::uint64_t seed) const;
};

struct LanczosOptions {
    double tol = 1e-9;          // relative residual target
    int max_apply = 10000;      // budget of operator applications
    std::uint64_t seed = 0;
    int check_every = 10;       // Ritz refresh cadence (in steps)
};

struct SpectrumSlice {
    std::vector<double> values;     // descending
    ColMat vectors;                 // orthonormal, one column per value
    std::vector<double> residuals;  // ||A v - theta v|| per pair
    int applies = 0;
    bool degenerate_top = false;    // top gap below 1e-10 * |lambda_1|
    double op_norm_est = 0.0;
};

/// The `want` algebraically-largest eigenpairs of A. Residual contract:
/// ||A v - theta v|| <= tol * max(|theta|, 1e-8 * ||A||_est) for each
/// returned pair; throws ConvergenceError when max_apply runs out first.
/// Lanczos with full reorthogonalization; random restart on breakdown, so
/// exact multiplicities are still discovered. Deterministic given seed.
SpectrumSlice lanczos_top(const SymmetricOp& A, int want, const LanczosOptions& opt);

/// For positive semidefinite A: every eigenpair with value >= cutoff_rel *
/// lambda_max. After the sweep converges, deflated probes certify that no
/// direction above the cutoff was missed (multiple eigenvalues appear once
/// per Krylov sequence, so certification has to probe the complement).
SpectrumSlice lanczos_above_cutoff(const SymmetricOp& A, double cutoff_rel,
                                   const LanczosOptions& opt);

/// Eigendecomposition of the symmetric tridiagonal matrix with diagonal d
/// and off-diagonal e (e[i] couples i and i+1). Implicit-shift QL. Values
/// come back ascending; when vectors is non-null it receives one orthonormal
/// column per value.
void tridiag_eigen(std::vector<double> d, std::vector<double> e,
                   std::vector<double>& values, ColMat* vectors);

} // namespace nrdr
