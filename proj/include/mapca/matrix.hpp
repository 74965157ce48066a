#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mapca {

using Vector = std::vector<double>;

/// Dense row-major real matrix with value semantics.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> entries);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }
    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

    Vector column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const double> values);
    Vector diagonal_entries() const;

    Matrix transpose() const;
    /// Columns [first, first + count).
    Matrix columns(std::size_t first, std::size_t count) const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Vector operator*(const Matrix& a, std::span<const double> x);

double max_abs(const Matrix& a);
double max_abs(std::span<const double> v);
double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
double frobenius_norm(const Matrix& a);
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double trace(const Matrix& a);

Matrix hadamard(const Matrix& a, const Matrix& b);
/// diag(d) * a
Matrix scale_rows(const Matrix& a, std::span<const double> d);
/// a * diag(d)
Matrix scale_cols(const Matrix& a, std::span<const double> d);

/// Determinant via LU with partial pivoting.
double determinant(const Matrix& a);
/// Inverse via LU with partial pivoting; throws on a numerically singular matrix.
Matrix inverse(const Matrix& a);

/// Orthonormal factor of a QR factorization, with the triangular factor's
/// diagonal made positive. Requires full column rank.
Matrix orthonormal_factor(const Matrix& a);

} // namespace mapca
