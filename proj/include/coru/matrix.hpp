#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coru {

/// Dense m-by-n real matrix, row-major, double precision.
///
/// Values are immutable in spirit: library operations never modify their
/// inputs, and a constructed matrix is safe to share across threads.
/// Construction from raw entries validates shape and finiteness.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(check_dims(rows, cols), 0.0) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        check_dims(rows, cols);
        if (data_.size() != rows * cols)
            throw std::invalid_argument("Matrix: entries size " + std::to_string(data_.size()) +
                                        " does not match " + std::to_string(rows) + "x" +
                                        std::to_string(cols));
        for (double x : data_)
            if (!std::isfinite(x))
                throw std::invalid_argument("Matrix: non-finite entry");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

    const double* row(std::size_t i) const noexcept { return data_.data() + i * cols_; }
    double* row(std::size_t i) noexcept { return data_.data() + i * cols_; }

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// First k columns.
    Matrix left_cols(std::size_t k) const {
        if (k < 1 || k > cols_) throw std::invalid_argument("left_cols: k out of range");
        Matrix m(rows_, k);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < k; ++j) m(i, j) = (*this)(i, j);
        return m;
    }

    /// First k rows.
    Matrix top_rows(std::size_t k) const {
        if (k < 1 || k > rows_) throw std::invalid_argument("top_rows: k out of range");
        Matrix m(k, cols_);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
        return m;
    }

    Matrix& operator+=(const Matrix& o) {
        require_same_shape(o, "+=");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        require_same_shape(o, "-=");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Matrix& operator*=(double s) {
        for (double& x : data_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }

private:
    static std::size_t check_dims(std::size_t rows, std::size_t cols) {
        if (rows == 0 || cols == 0) throw std::invalid_argument("Matrix: dimensions must be positive");
        return rows * cols;
    }
    void require_same_shape(const Matrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument(std::string("Matrix ") + op + ": shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// Matrix product in the reference i-k-j summation order: the partial sums of
/// c(i,j) accumulate over k in increasing order. Any alternative execution
/// must agree with this order to 1e-12 relative per entry.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: inner dimensions " + std::to_string(a.cols()) +
                                    " and " + std::to_string(b.rows()) + " differ");
    Matrix c(a.rows(), b.cols());
    const std::size_t n = b.cols(), kk = a.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* ci = c.row(i);
        const double* ai = a.row(i);
        for (std::size_t k = 0; k < kk; ++k) {
            const double aik = ai[k];
            const double* bk = b.row(k);
            for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

inline double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double x : a.data()) s += x * x;
    return std::sqrt(s);
}

inline double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace coru
