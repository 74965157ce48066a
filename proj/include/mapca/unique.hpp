#pragma once

// Linear maps on symmetric matrices and a brute-force linear-system check of
// the uniqueness of the diagonal extractor among linear maps f with
//   (i)   f(C S C) = C f(S) C for diagonal C
//   (ii)  f(S) diagonal
//   (iii) f(I) = I.
//
// Symmetric p x p matrices are half-vectorized over the entries (i, j) with
// i <= j in row-major order; coordinate (i, j) multiplies the basis element
// e_i e_j^T + e_j e_i^T (or e_i e_i^T on the diagonal).

#include <cstdint>
#include <optional>
#include <utility>

#include "mapca/matcore.hpp"

namespace mapca::unique {

std::size_t half_dim(std::size_t p) noexcept;
/// Index of entry (i, j) in the half-vectorization; symmetric in (i, j).
std::size_t half_index(std::size_t p, std::size_t i, std::size_t j) noexcept;
/// Inverse of half_index.
std::pair<std::size_t, std::size_t> half_entry(std::size_t p, std::size_t index) noexcept;

Vector half_vectorize(const SymmetricMatrix& s);
SymmetricMatrix from_half_vector(std::span<const double> v, std::size_t p);

/// Linear endomorphism of symmetric p x p matrices, stored as the d x d
/// coefficient matrix acting on half-vectorizations (d = p(p+1)/2).
class LinearMetricMap {
public:
    LinearMetricMap(std::size_t p, Matrix coefficients);

    static LinearMetricMap identity(std::size_t p);

    std::size_t p() const noexcept { return p_; }
    const Matrix& coefficients() const noexcept { return coefficients_; }

    SymmetricMatrix apply(const SymmetricMatrix& s) const;

private:
    std::size_t p_;
    Matrix coefficients_;
};

/// f(S) = A (Hadamard) S.
LinearMetricMap schur_map(const SymmetricMatrix& a);
/// f(S) = diag(S_11, ..., S_pp), the Schur map with A = I.
LinearMetricMap diag_extractor(std::size_t p);
/// f(S) = tr(S) I; linear but not a Schur map for p >= 2.
LinearMetricMap trace_map(std::size_t p);

struct ConditionReport {
    double equivariance_violation = 0.0;
    double diagonal_violation = 0.0;
    double normalization_violation = 0.0;
    bool equivariant = false;
    bool diagonal_valued = false;
    bool normalized = false;
};

/// Evaluates conditions (i)-(iii) on seeded random SPD matrices and diagonal
/// scalings (half of the trials with signed entries). Violations are
/// measured relative to max(1, |reference|_max).
ConditionReport check_conditions(const LinearMetricMap& f, std::size_t trials, std::uint64_t seed,
                                 double tolerance = 1e-9);

struct UniquenessOptions {
    std::size_t p = 2;
    /// Defaults of zero mean 2d covariance samples and 2p scalings.
    std::size_t n_sigma = 0;
    std::size_t n_scaling = 0;
    std::uint64_t seed = 0;
    bool signed_scalings = false;
    /// Relative eigenvalue cutoff for the numerical nullspace.
    double singular_threshold = 1e-8;
};

struct UniquenessResult {
    std::size_t p = 0;
    /// Dimension of the solution space of (i) + (ii).
    std::size_t homogeneous_dim = 0;
    /// Dimension of the affine solution space of (i) + (ii) + (iii).
    std::size_t solution_space_dim = 0;
    /// Least-squares solution of the full system.
    LinearMetricMap solution;
    /// max |solution coefficients - diag_extractor coefficients|
    double max_deviation_from_diag = 0.0;
    /// max |residual| of the full system at the solution.
    double residual = 0.0;
    std::size_t equation_count = 0;
};

/// Assembles the linear system over the d^2 coefficients of an unknown f and
/// computes its solution space from the eigendecomposition of the normal
/// equations. Throws ErrorKind::rank_deficient when (i) + (ii) leave more than
/// p free directions, which only happens with too few samples.
UniquenessResult solve_uniqueness(const UniquenessOptions& options);

struct SchurProjection {
    bool is_schur = false;
    /// Candidate coefficients read off the basis images; set when is_schur.
    std::optional<SymmetricMatrix> coefficients;
    bool psd = false;
    double validation_residual = 0.0;
};

/// Reads candidate a_ij from f applied to the basis elements, then checks
/// f(S) = A (Hadamard) S on seeded random SPD matrices.
SchurProjection schur_class_projection(const LinearMetricMap& f, std::size_t trials, std::uint64_t seed,
                                       double tolerance = 1e-9);

struct PermutationReport {
    double violation = 0.0;
    bool pass = false;
};

/// Checks f(P S P^T) = P f(S) P^T for every adjacent transposition and a few
/// seeded random permutations.
PermutationReport permutation_equivariance_check(const LinearMetricMap& f, std::uint64_t seed,
                                                 double tolerance = 1e-9);

} // namespace mapca::unique
