#pragma once

// Group actions on MAPCA problems: congruence, diagonal rescaling, the
// M-orthogonal group and the right O(k) gauge action, plus the checks that
// compare a problem with its transformed copy.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mapca/random.hpp"
#include "mapca/solver.hpp"

namespace mapca::equiv {

/// C = diag(c_1, ..., c_p) with every c_i nonzero (positive when
/// positive_only).
class DiagonalScaling {
public:
    DiagonalScaling(Vector entries, bool positive_only = true);

    static DiagonalScaling uniform(std::size_t p, double c);
    /// Entries log-uniform in [lo, hi]; with allow_signs each entry is negated
    /// with probability 1/2.
    static DiagonalScaling random(Rng& rng, std::size_t p, double lo, double hi, bool allow_signs = false);

    std::size_t dim() const noexcept { return entries_.size(); }
    const Vector& entries() const noexcept { return entries_; }
    bool positive_only() const noexcept { return positive_only_; }
    Matrix matrix() const { return Matrix::diagonal(entries_); }
    Vector inverse_entries() const;

    /// C S C
    SymmetricMatrix apply(const SymmetricMatrix& s) const;

private:
    Vector entries_;
    bool positive_only_;
};

/// Invertible P acting as (S, M) -> (P S P^T, P M P^T).
class CongruenceTransform {
public:
    explicit CongruenceTransform(Matrix p);

    const Matrix& matrix() const noexcept { return p_; }

private:
    Matrix p_;
};

/// Q with Q^T M Q = M.
class MOrthogonalElement {
public:
    MOrthogonalElement(Matrix q, Metric metric);

    const Matrix& matrix() const noexcept { return q_; }
    const Metric& metric() const noexcept { return metric_; }

private:
    Matrix q_;
    Metric metric_;
};

/// (P S P^T, P M P^T); throws ErrorKind::not_spd if the transformed metric
/// is numerically indefinite.
std::pair<SymmetricMatrix, Metric> apply_congruence(const SymmetricMatrix& sigma, const Metric& metric,
                                                    const CongruenceTransform& p);

/// max_i |a_i - b_i| / max(1, |b_i|)
double relative_spectrum_deviation(std::span<const double> a, std::span<const double> b);

/// Runs of consecutive indices whose neighbouring eigenvalues differ by less
/// than gap * max(1, |lambda|).
std::vector<std::pair<std::size_t, std::size_t>> eigenvalue_groups(std::span<const double> values,
                                                                   double gap = 1e-6);

struct EquivarianceReport {
    std::string rule;
    std::size_t p = 0;
    std::uint64_t seed = 0;
    /// Spectrum and loading deviation after removing one global positive
    /// scale factor; these decide `pass`.
    double spectrum_deviation = 0.0;
    double loading_deviation = 0.0;
    /// The same comparisons without the scale factor; these decide
    /// `strict_pass`.
    double strict_spectrum_deviation = 0.0;
    double strict_loading_deviation = 0.0;
    /// sum(lambda~) / sum(lambda)
    double scale_factor = 1.0;
    /// Loadings were compared through eigenvalue-group projectors because the
    /// spectrum has a gap below 1e-6.
    bool projector_comparison = false;
    bool pass = false;
    bool strict_pass = false;
};

/// Solves (Sigma, rule(Sigma)) and (C Sigma C, rule(C Sigma C)) with k = p
/// and compares the solutions against lambda~ = lambda, w~ = C^{-1} w.
/// Loadings are compared column by column up to sign, or through
/// group projectors P~ = C^{-1} P C at near-degenerate spectra.
EquivarianceReport check_scale_equivariance(const SymmetricMatrix& sigma, const MetricRule& rule,
                                            const DiagonalScaling& c, std::uint64_t seed = 0,
                                            double tolerance = 1e-8);

enum class ScalingMode { non_uniform, uniform };

struct Counterexample {
    SymmetricMatrix sigma;
    DiagonalScaling scaling;
    /// max |N1/||N1||_F - N2/||N2||_F| for N1 = (C S C)^beta, N2 = C S^beta C.
    double deviation;
    /// max |N1 - N2|
    double literal_deviation;
};

/// Scale-free and literal deviation of (C S C)^beta from C S^beta C, as
/// {deviation, literal_deviation}.
std::pair<double, double> tensorial_deviation(const SymmetricMatrix& sigma, const DiagonalScaling& c, double beta);

/// Samples `trials` seeded (Sigma, C) pairs and keeps the one with the largest
/// scale-free deviation from the tensorial identity (C S C)^beta = C S^beta C.
Counterexample beta_counterexample_search(std::size_t p, double beta, std::size_t trials, std::uint64_t seed,
                                          ScalingMode mode = ScalingMode::non_uniform);

/// Q = M^{-1/2} R M^{1/2}; R must be orthogonal.
MOrthogonalElement m_orthogonal_from(const Metric& metric, const Matrix& r);
MOrthogonalElement sample_m_orthogonal(const Metric& metric, std::uint64_t seed);

/// Loadings W R (and U R). The eigenvalues are carried over unchanged; once R
/// mixes columns they describe the subspace, not individual columns.
MapcaSolution gauge_action(const MapcaSolution& solution, const Matrix& r, const Metric& metric);

} // namespace mapca::equiv
