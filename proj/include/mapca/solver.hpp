#pragma once

// Metric-aware PCA: maximize Tr(W^T S W) subject to W^T M W = I_k, solved
// through the effective operator A = M^{-1/2} S M^{-1/2}.

#include <cstddef>
#include <string>

#include "mapca/kernels.hpp"
#include "mapca/matcore.hpp"

namespace mapca {

/// n x p sample matrix, rows are samples.
class DataMatrix {
public:
    explicit DataMatrix(Matrix values);

    std::size_t n() const noexcept { return values_.rows(); }
    std::size_t p() const noexcept { return values_.cols(); }
    const Matrix& values() const noexcept { return values_; }

private:
    Matrix values_;
};

enum class Divisor { n_minus_1, n };

SymmetricMatrix covariance(const DataMatrix& x, Divisor divisor = Divisor::n_minus_1,
                           kernels::Backend backend = kernels::default_backend());

struct MapcaProblem {
    MapcaProblem(SymmetricMatrix sigma, Metric metric, std::size_t k);

    SymmetricMatrix sigma;
    Metric metric;
    std::size_t k;
};

/// Which end of the generalized spectrum to keep.
enum class SpectrumEnd { largest, smallest };

struct MapcaSolution {
    /// Selected generalized eigenvalues; descending for `largest`, ascending
    /// for `smallest`.
    Vector eigenvalues;
    /// p x k loadings W in original coordinates, W^T M W = I_k. Each column
    /// carries the sign convention of apply_sign_convention.
    Matrix loadings;
    /// p x k loadings U = M^{1/2} W in whitened coordinates, U^T U = I_k.
    Matrix whitened_loadings;
    /// Full spectrum of the effective operator, descending.
    Vector effective_operator_spectrum;
    SpectrumEnd end = SpectrumEnd::largest;
};

SymmetricMatrix effective_operator(const SymmetricMatrix& sigma, const Metric& metric);

/// Generalized eigenpairs of S w = lambda M w. Loadings are back-transformed as
/// w = M^{-1/2} u and are normalized only by w^T M w = 1. Repeated eigenvalues
/// leave the individual columns of a repeated group arbitrary within their
/// subspace; compare such groups through projector().
MapcaSolution solve(const MapcaProblem& problem, SpectrumEnd end = SpectrumEnd::largest);

/// Sigma^beta. Any real beta is accepted here; the CLI restricts to [0, 1].
Metric beta_metric(const SymmetricMatrix& sigma, double beta);

/// lambda_i^{1-beta} for the eigenvalues of sigma, descending.
Vector beta_spectrum(const SymmetricMatrix& sigma, double beta);

/// diag(Sigma_11, ..., Sigma_pp); throws ErrorKind::not_spd on a
/// non-positive diagonal entry.
Metric ipca_metric(const SymmetricMatrix& sigma);

/// P = W W^T M.
Matrix projector(const Matrix& loadings, const Metric& metric);
Matrix projector(const MapcaSolution& solution, const Metric& metric);

/// max |W^T M W - target|
double constraint_residual(const Matrix& loadings, const Metric& metric, const Matrix& target);
double constraint_residual(const Matrix& loadings, const Metric& metric);

/// max over returned pairs of ||S w - lambda M w||_max / max(1, |lambda|).
double eigen_residual(const SymmetricMatrix& sigma, const Metric& metric, const MapcaSolution& solution);

/// Tr(W^T S W)
double objective(const Matrix& loadings, const SymmetricMatrix& sigma);

/// Data-derived metric rule M = f(Sigma).
///   identity    f(Sigma) = I (standard PCA)
///   diag        f(Sigma) = diag(Sigma) (IPCA)
///   beta(b)     f(Sigma) = Sigma^b
///   covariance  f(Sigma) = Sigma (whitening; the deep "identity_rule")
class MetricRule {
public:
    enum class Kind { identity, diag, beta, covariance };

    static MetricRule identity() { return MetricRule(Kind::identity, 0.0); }
    static MetricRule diag() { return MetricRule(Kind::diag, 0.0); }
    static MetricRule beta(double b) { return MetricRule(Kind::beta, b); }
    static MetricRule covariance() { return MetricRule(Kind::covariance, 1.0); }
    /// Accepts "identity", "diag", "beta=<v>", "beta(<v>)", "covariance" and
    /// "identity_rule".
    static MetricRule parse(const std::string& text);

    Kind kind() const noexcept { return kind_; }
    double exponent() const noexcept { return beta_; }
    std::string name() const;

    Metric apply(const SymmetricMatrix& sigma) const;

private:
    MetricRule(Kind kind, double beta) : kind_(kind), beta_(beta) {}

    Kind kind_;
    double beta_;
};

} // namespace mapca
