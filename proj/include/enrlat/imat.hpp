#pragma once

#include "enrlat/bigint.hpp"
#include "enrlat/errors.hpp"

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <tuple>
#include <vector>

namespace enrlat {

/// Dense row-major matrix over an exact scalar type.
template <typename T>
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, T fill = T(0))
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}
    Mat(std::size_t rows, std::size_t cols, std::initializer_list<T> vals)
        : rows_(rows), cols_(cols), a_(vals) {
        if (a_.size() != rows * cols) fail(ErrorCode::BadGram, "matrix literal size mismatch");
    }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    Mat transposed() const {
        Mat t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < rows_; ++k) std::swap((*this)(k, i), (*this)(k, j));
    }
    // row i += c * row j
    void add_row(std::size_t i, std::size_t j, const T& c) {
        for (std::size_t k = 0; k < cols_; ++k) (*this)(i, k) += c * (*this)(j, k);
    }
    void add_col(std::size_t i, std::size_t j, const T& c) {
        for (std::size_t k = 0; k < rows_; ++k) (*this)(k, i) += c * (*this)(k, j);
    }
    void negate_row(std::size_t i) {
        for (std::size_t k = 0; k < cols_; ++k) (*this)(i, k) = -(*this)(i, k);
    }
    void negate_col(std::size_t i) {
        for (std::size_t k = 0; k < rows_; ++k) (*this)(k, i) = -(*this)(k, i);
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

using IMat = Mat<Int>;
using Mat64 = Mat<std::int64_t>;

template <typename T, typename U>
Mat<T> mat_cast(const Mat<U>& m) {
    Mat<T> r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = static_cast<T>(m(i, j));
    return r;
}

inline IMat widen(const Mat64& m) {
    IMat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
    return r;
}

/// Narrows to int64, failing loudly if an entry does not fit.
Mat64 narrow(const IMat& m);

template <typename T>
Mat<T> mat_mul(const Mat<T>& a, const Mat<T>& b) {
    if (a.cols() != b.rows()) fail(ErrorCode::InternalInconsistency, "matrix product shape mismatch");
    Mat<T> r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T& v = a(i, k);
            if (v == T(0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += v * b(k, j);
        }
    return r;
}

/// Fraction-free determinant (Bareiss).
Int det(const IMat& m);

/// Smith normal form u*m*v = d with |det u| = |det v| = 1 and
/// d diagonal, nonnegative, each entry dividing the next.
struct SnfResult {
    IMat d, u, v;
    std::vector<Int> diagonal() const;
};
SnfResult smith_form(const IMat& m);

/// Basis of the integer kernel {x : m x = 0}, as matrix columns.
/// The basis spans the full (saturated) kernel lattice.
IMat integer_kernel(const IMat& m);

/// One integral solution of m x = b, if any.
std::optional<std::vector<Int>> solve_integer(const IMat& m, const std::vector<Int>& b);

/// Exact inverse for matrices with det = ±1.
std::optional<IMat> unimodular_inverse(const IMat& m);

/// Signature (positives, negatives, zeros) of a symmetric integer matrix,
/// by exact congruence diagonalization over the rationals.
std::tuple<int, int, int> signature(const Mat64& g);

} // namespace enrlat
