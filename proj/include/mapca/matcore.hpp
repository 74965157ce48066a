#pragma once

// Dense symmetric linear algebra: the cyclic Jacobi eigensolver, SPD metrics
// and spectral functions of them.

#include <cstddef>
#include <functional>
#include <span>

#include "mapca/matrix.hpp"

namespace mapca {

/// Square matrix whose (i,j) and (j,i) entries are bit-identical.
class SymmetricMatrix {
public:
    /// Accepts `m` if it is square and symmetric to within
    /// `tolerance * max(1, max|m|)`, then stores its exact symmetric part.
    explicit SymmetricMatrix(const Matrix& m, double tolerance = 1e-12);

    /// (m + m^T) / 2 without a symmetry check, for computed products whose
    /// asymmetry is roundoff.
    static SymmetricMatrix symmetrize(const Matrix& m);
    static SymmetricMatrix identity(std::size_t n);
    static SymmetricMatrix diagonal(std::span<const double> entries);

    std::size_t dim() const noexcept { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
    const Matrix& matrix() const noexcept { return m_; }

    bool operator==(const SymmetricMatrix&) const = default;

private:
    struct Trusted {};
    SymmetricMatrix(Matrix m, Trusted) : m_(std::move(m)) {}

    Matrix m_;
};

struct EigenDecomposition {
    /// Sorted descending.
    Vector eigenvalues;
    /// Unit-norm eigenvectors as columns, aligned with `eigenvalues`.
    Matrix eigenvectors;
};

struct EighOptions {
    int max_sweeps = 100;
    /// Convergence when the off-diagonal Frobenius norm drops below
    /// `tolerance * ||S||_F`.
    double tolerance = 1e-13;
};

/// Cyclic Jacobi eigendecomposition. Throws ErrorKind::no_convergence when the
/// sweep cap is hit.
EigenDecomposition eigh(const SymmetricMatrix& s, const EighOptions& options = {});

/// Flips each column so that its first entry with |v| > threshold is positive.
void apply_sign_convention(Matrix& vectors, double threshold = 1e-12);

/// Returns V diag(f(lambda)) V^T, exactly symmetric.
SymmetricMatrix spectral_function(const EigenDecomposition& eig, const std::function<double(double)>& f);

/// Symmetric positive-definite matrix with its eigendecomposition and
/// symmetric square roots computed once at construction.
class Metric {
public:
    /// Throws ErrorKind::not_spd unless lambda_min > 1e-12 * max(1, lambda_max).
    explicit Metric(SymmetricMatrix m);

    static Metric identity(std::size_t n);
    static Metric diagonal(std::span<const double> entries);

    std::size_t dim() const noexcept { return matrix_.dim(); }
    const SymmetricMatrix& matrix() const noexcept { return matrix_; }
    const EigenDecomposition& decomposition() const noexcept { return eig_; }
    double min_eigenvalue() const noexcept { return eig_.eigenvalues.back(); }
    double max_eigenvalue() const noexcept { return eig_.eigenvalues.front(); }

    const SymmetricMatrix& sqrt() const noexcept { return sqrt_; }
    const SymmetricMatrix& inv_sqrt() const noexcept { return inv_sqrt_; }

private:
    SymmetricMatrix matrix_;
    EigenDecomposition eig_;
    SymmetricMatrix sqrt_;
    SymmetricMatrix inv_sqrt_;
};

/// V diag(lambda^beta) V^T.
SymmetricMatrix matrix_power(const Metric& m, double beta);

struct SqrtPair {
    SymmetricMatrix sqrt;
    SymmetricMatrix inv_sqrt;
};

SqrtPair sqrt_and_invsqrt(const Metric& m);

/// lambda_max / lambda_min; throws ErrorKind::not_spd when lambda_min <= 0.
double condition_number(const SymmetricMatrix& s);

/// True when every eigenvalue exceeds -tolerance * max(1, |lambda|_max).
bool is_psd(const SymmetricMatrix& s, double tolerance = 1e-12);

} // namespace mapca
