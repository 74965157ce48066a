#include "mapca/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "mapca/error.hpp"
#include "mapca/kernels.hpp"

namespace mapca {

namespace {

void check_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::dimension_mismatch, what);
}

struct Lu {
    Matrix factors;
    std::vector<std::size_t> pivots;
    int sign = 1;
    bool singular = false;
};

Lu lu_factor(const Matrix& a) {
    require(a.square(), ErrorKind::dimension_mismatch, "LU: matrix is not square");
    const std::size_t n = a.rows();
    Lu lu{a, std::vector<std::size_t>(n), 1, false};
    Matrix& f = lu.factors;
    const double scale = std::max(1.0, max_abs(a));
    for (std::size_t i = 0; i < n; ++i) lu.pivots[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(f(i, k)) > std::abs(f(piv, k))) piv = i;
        if (std::abs(f(piv, k)) <= 1e-300 * scale) {
            lu.singular = true;
            continue;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f(k, j), f(piv, j));
            std::swap(lu.pivots[k], lu.pivots[piv]);
            lu.sign = -lu.sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = f(i, k) / f(k, k);
            f(i, k) = m;
            for (std::size_t j = k + 1; j < n; ++j) f(i, j) -= m * f(k, j);
        }
    }
    return lu;
}

} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
    require(data_.size() == rows * cols, ErrorKind::dimension_mismatch, "Matrix: value count does not match shape");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        require(r.size() == cols_, ErrorKind::dimension_mismatch, "Matrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> entries) {
    Matrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
}

Vector Matrix::column(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void Matrix::set_column(std::size_t j, std::span<const double> values) {
    require(values.size() == rows_, ErrorKind::dimension_mismatch, "set_column: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

Vector Matrix::diagonal_entries() const {
    Vector d(std::min(rows_, cols_));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i);
    return d;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::columns(std::size_t first, std::size_t count) const {
    require(first + count <= cols_, ErrorKind::dimension_mismatch, "columns: range out of bounds");
    Matrix out(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
    return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) { return kernels::multiply(a, b); }

Matrix operator+(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "operator+: shape mismatch");
    Matrix c = a;
    auto cd = c.data();
    auto bd = b.data();
    for (std::size_t i = 0; i < cd.size(); ++i) cd[i] += bd[i];
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "operator-: shape mismatch");
    Matrix c = a;
    auto cd = c.data();
    auto bd = b.data();
    for (std::size_t i = 0; i < cd.size(); ++i) cd[i] -= bd[i];
    return c;
}

Matrix operator*(double s, const Matrix& a) {
    Matrix c = a;
    for (double& v : c.data()) v *= s;
    return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
    require(a.cols() == x.size(), ErrorKind::dimension_mismatch, "matvec: dimension mismatch");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * x[k];
        y[i] = s;
    }
    return y;
}

double max_abs(const Matrix& a) { return max_abs(a.data()); }

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "max_abs_diff: shape mismatch");
    return max_abs_diff(a.data(), b.data());
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), ErrorKind::dimension_mismatch, "max_abs_diff: length mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double frobenius_norm(const Matrix& a) { return norm2(a.data()); }

double dot(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), ErrorKind::dimension_mismatch, "dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double trace(const Matrix& a) {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
    return t;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "hadamard: shape mismatch");
    Matrix c = a;
    auto cd = c.data();
    auto bd = b.data();
    for (std::size_t i = 0; i < cd.size(); ++i) cd[i] *= bd[i];
    return c;
}

Matrix scale_rows(const Matrix& a, std::span<const double> d) {
    require(d.size() == a.rows(), ErrorKind::dimension_mismatch, "scale_rows: length mismatch");
    Matrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (double& v : c.row(i)) v *= d[i];
    return c;
}

Matrix scale_cols(const Matrix& a, std::span<const double> d) {
    require(d.size() == a.cols(), ErrorKind::dimension_mismatch, "scale_cols: length mismatch");
    Matrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto r = c.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) r[j] *= d[j];
    }
    return c;
}

double determinant(const Matrix& a) {
    const Lu lu = lu_factor(a);
    if (lu.singular) return 0.0;
    double det = lu.sign;
    for (std::size_t i = 0; i < a.rows(); ++i) det *= lu.factors(i, i);
    return det;
}

Matrix inverse(const Matrix& a) {
    const Lu lu = lu_factor(a);
    require(!lu.singular, ErrorKind::invalid_argument, "inverse: matrix is numerically singular");
    const std::size_t n = a.rows();
    const Matrix& f = lu.factors;
    Matrix inv(n, n);
    Vector col(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = lu.pivots[i] == j ? 1.0 : 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < i; ++k) col[i] -= f(i, k) * col[k];
        for (std::size_t ii = n; ii-- > 0;) {
            for (std::size_t k = ii + 1; k < n; ++k) col[ii] -= f(ii, k) * col[k];
            col[ii] /= f(ii, ii);
        }
        inv.set_column(j, col);
    }
    return inv;
}

Matrix orthonormal_factor(const Matrix& a) {
    // Modified Gram-Schmidt with one reorthogonalization pass; the projection
    // onto each new column is positive, so the triangular diagonal is too.
    Matrix q = a;
    const std::size_t m = a.rows();
    for (std::size_t j = 0; j < a.cols(); ++j) {
        Vector v = q.column(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                double r = 0.0;
                for (std::size_t i = 0; i < m; ++i) r += q(i, k) * v[i];
                for (std::size_t i = 0; i < m; ++i) v[i] -= r * q(i, k);
            }
        }
        const double nrm = norm2(v);
        require(nrm > 1e-12 * std::max(1.0, norm2(a.column(j))), ErrorKind::invalid_argument,
                "orthonormal_factor: matrix is rank deficient");
        for (double& x : v) x /= nrm;
        q.set_column(j, v);
    }
    return q;
}

} // namespace mapca
