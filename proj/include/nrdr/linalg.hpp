#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "nrdr/simd/kernels.hpp"

namespace nrdr {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    return simd::kernels().dot(a.data(), b.data(), a.size());
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, const Vec& x, Vec& y) {
    simd::kernels().axpy(alpha, x.data(), y.data(), x.size());
}

inline void scale(Vec& x, double alpha) {
    simd::kernels().scale(x.data(), alpha, x.size());
}

inline double sum(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

/// Column-major dense matrix; columns are contiguous. Used for projection
/// stacks, deflation bases and Krylov bases, where all access is per column.
class ColMat {
public:
    ColMat() = default;
    ColMat(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double* col(int j) { return data_.data() + std::size_t(j) * rows_; }
    const double* col(int j) const { return data_.data() + std::size_t(j) * rows_; }
    std::span<const double> col_span(int j) const { return {col(j), std::size_t(rows_)}; }

    double& operator()(int i, int j) { return data_[std::size_t(j) * rows_ + i]; }
    double operator()(int i, int j) const { return data_[std::size_t(j) * rows_ + i]; }

    void set_col(int j, const Vec& v) {
        std::copy(v.begin(), v.end(), col(j));
    }
    Vec col_vec(int j) const { return Vec(col(j), col(j) + rows_); }

    /// Appends a column (reallocates; fine at the growth rates we use).
    void push_col(const Vec& v) {
        data_.insert(data_.end(), v.begin(), v.end());
        if (cols_ == 0) rows_ = static_cast<int>(v.size());
        ++cols_;
    }

    /// Keeps only the first k columns.
    void truncate_cols(int k) {
        data_.resize(std::size_t(k) * rows_);
        cols_ = k;
    }

    /// out = M^T x  (len cols)
    void tgemv(const double* x, double* out) const {
        for (int j = 0; j < cols_; ++j) out[j] = simd::kernels().dot(col(j), x, rows_);
    }

    /// y += M z  (z len cols)
    void gemv_acc(const double* z, double* y) const {
        for (int j = 0; j < cols_; ++j) simd::kernels().axpy(z[j], col(j), y, rows_);
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// Row-major dense matrix; rows are contiguous. Used for point clouds and
/// per-sample feature rows, where distance kernels stream over rows.
class RowMat {
public:
    RowMat() = default;
    RowMat(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double* row(int i) { return data_.data() + std::size_t(i) * cols_; }
    const double* row(int i) const { return data_.data() + std::size_t(i) * cols_; }

    double& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool empty() const { return rows_ == 0 || cols_ == 0; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// Compressed sparse row matrix with 32-bit column indices (fits the AVX2
/// gather path; N stays far below 2^31 here).
class CsrMatrix {
public:
    CsrMatrix() = default;

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(vals_.size()); }

    /// Builder: rows must be pushed in order, with column indices ascending.
    void init(int rows, int cols) {
        rows_ = rows;
        cols_ = cols;
        rowptr_.assign(1, 0);
        colidx_.clear();
        vals_.clear();
    }
    void push_row(std::span<const std::int32_t> cols, std::span<const double> vals) {
        colidx_.insert(colidx_.end(), cols.begin(), cols.end());
        vals_.insert(vals_.end(), vals.begin(), vals.end());
        rowptr_.push_back(static_cast<std::int64_t>(colidx_.size()));
    }

    /// Parallel-build support: preallocate from per-row counts, then fill
    /// rows independently (each row owned by one thread).
    void init_from_counts(int rows, int cols, const std::vector<std::int64_t>& counts) {
        rows_ = rows;
        cols_ = cols;
        rowptr_.assign(rows + 1, 0);
        for (int i = 0; i < rows; ++i) rowptr_[i + 1] = rowptr_[i] + counts[i];
        colidx_.resize(rowptr_[rows]);
        vals_.resize(rowptr_[rows]);
    }
    std::int32_t* row_cols(int i) { return colidx_.data() + rowptr_[i]; }
    double* row_vals(int i) { return vals_.data() + rowptr_[i]; }
    const std::int32_t* row_cols(int i) const { return colidx_.data() + rowptr_[i]; }
    const double* row_vals(int i) const { return vals_.data() + rowptr_[i]; }
    std::int64_t row_nnz(int i) const { return rowptr_[i + 1] - rowptr_[i]; }

    /// y = A x
    void apply(const double* x, double* y) const;
    /// y = A^T x  (sequential scatter; deterministic)
    void apply_transpose(const double* x, double* y) const;

    double frobenius_sq() const {
        double s = 0.0;
        for (double v : vals_) s += v * v;
        return s;
    }

    /// Dense copy, row-major. For tests and small-instance oracles only.
    RowMat to_dense() const;

    const std::vector<std::int64_t>& rowptr() const { return rowptr_; }
    const std::vector<std::int32_t>& colidx() const { return colidx_; }
    const std::vector<double>& vals() const { return vals_; }
    std::vector<double>& vals() { return vals_; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<std::int64_t> rowptr_{0};
    std::vector<std::int32_t> colidx_;
    std::vector<double> vals_;
};

} // namespace nrdr
