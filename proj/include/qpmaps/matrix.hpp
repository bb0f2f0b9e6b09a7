#pragma once

// Small dense row-major matrix. Map dimensions here are single digits, so
// there is no blocking or cleverness; the point is value semantics and
// bounds-checked indexing.

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "qpmaps/errors.hpp"

namespace qpmaps {

template <typename T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols, T fill = T())
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<T>> rows)
        : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw DimensionMismatch("ragged initializer for matrix");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix I(n, n, T(0));
        for (std::size_t i = 0; i < n; ++i) I(i, i) = T(1);
        return I;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    T& operator()(std::size_t i, std::size_t j) {
        check(i, j);
        return data_[i * cols_ + j];
    }
    const T& operator()(std::size_t i, std::size_t j) const {
        check(i, j);
        return data_[i * cols_ + j];
    }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    std::vector<T> row(std::size_t i) const {
        check(i, 0, /*allow_zero_cols=*/true);
        return std::vector<T>(data_.begin() + i * cols_,
                              data_.begin() + (i + 1) * cols_);
    }

    std::vector<T> col(std::size_t j) const {
        if (j >= cols_)
            throw IndexOutOfRange("column index out of range");
        std::vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

private:
    void check(std::size_t i, std::size_t j, bool allow_zero_cols = false) const {
        if (i >= rows_ || (!allow_zero_cols && j >= cols_))
            throw IndexOutOfRange("matrix index out of range");
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<T> data_;
};

template <typename T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows())
        throw DimensionMismatch("matrix product shape mismatch");
    Matrix<T> c(a.rows(), b.cols(), T(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += a(i, k) * b(k, j);
    return c;
}

template <typename T>
std::vector<T> operator*(const Matrix<T>& a, const std::vector<T>& v) {
    if (a.cols() != v.size())
        throw DimensionMismatch("matrix-vector shape mismatch");
    std::vector<T> r(a.rows(), T(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            r[i] += a(i, j) * v[j];
    return r;
}

} // namespace qpmaps
