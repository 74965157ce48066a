#include "mapca/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mapca/error.hpp"

namespace mapca {

namespace {

// Sign convention for loadings that are not unit norm: the threshold is taken
// relative to the column's largest entry.
void orient_columns(Matrix& w, Matrix& u) {
    for (std::size_t j = 0; j < w.cols(); ++j) {
        double scale = 0.0;
        for (std::size_t i = 0; i < w.rows(); ++i) scale = std::max(scale, std::abs(w(i, j)));
        for (std::size_t i = 0; i < w.rows(); ++i) {
            if (std::abs(w(i, j)) > 1e-12 * scale) {
                if (w(i, j) < 0.0) {
                    for (std::size_t r = 0; r < w.rows(); ++r) {
                        w(r, j) = -w(r, j);
                        u(r, j) = -u(r, j);
                    }
                }
                break;
            }
        }
    }
}

double parse_real(const std::string& text, const std::string& context) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        fail(ErrorKind::malformed_input, context + ": '" + text + "' is not a number");
    }
    require(used == text.size() && std::isfinite(v), ErrorKind::malformed_input,
            context + ": '" + text + "' is not a finite number");
    return v;
}

} // namespace

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
    require(values_.rows() >= 2, ErrorKind::invalid_argument, "DataMatrix: at least two samples are required");
    require(values_.cols() >= 1, ErrorKind::invalid_argument, "DataMatrix: at least one feature is required");
}

SymmetricMatrix covariance(const DataMatrix& x, Divisor divisor, kernels::Backend backend) {
    const Vector means = kernels::column_means(x.values(), backend);
    const Matrix scatter = kernels::centered_gram(x.values(), means, backend);
    const double denom = static_cast<double>(divisor == Divisor::n_minus_1 ? x.n() - 1 : x.n());
    return SymmetricMatrix::symmetrize((1.0 / denom) * scatter);
}

MapcaProblem::MapcaProblem(SymmetricMatrix sigma_, Metric metric_, std::size_t k_)
    : sigma(std::move(sigma_)), metric(std::move(metric_)), k(k_) {
    require(sigma.dim() == metric.dim(), ErrorKind::dimension_mismatch,
            "MapcaProblem: covariance and metric dimensions differ");
    require(k >= 1 && k <= sigma.dim(), ErrorKind::dimension_mismatch,
            "MapcaProblem: component count must lie in [1, p]");
}

SymmetricMatrix effective_operator(const SymmetricMatrix& sigma, const Metric& metric) {
    require(sigma.dim() == metric.dim(), ErrorKind::dimension_mismatch,
            "effective_operator: covariance and metric dimensions differ");
    const Matrix& r = metric.inv_sqrt().matrix();
    return SymmetricMatrix::symmetrize(r * sigma.matrix() * r);
}

MapcaSolution solve(const MapcaProblem& problem, SpectrumEnd end) {
    const std::size_t p = problem.sigma.dim();
    const std::size_t k = problem.k;
    const EigenDecomposition eig = eigh(effective_operator(problem.sigma, problem.metric));

    MapcaSolution out;
    out.end = end;
    out.effective_operator_spectrum = eig.eigenvalues;
    out.eigenvalues.resize(k);
    out.whitened_loadings = Matrix(p, k);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t src = end == SpectrumEnd::largest ? j : p - 1 - j;
        out.eigenvalues[j] = eig.eigenvalues[src];
        for (std::size_t i = 0; i < p; ++i) out.whitened_loadings(i, j) = eig.eigenvectors(i, src);
    }
    out.loadings = problem.metric.inv_sqrt().matrix() * out.whitened_loadings;
    orient_columns(out.loadings, out.whitened_loadings);
    return out;
}

Metric beta_metric(const SymmetricMatrix& sigma, double beta) {
    if (beta == 0.0) return Metric::identity(sigma.dim());
    const Metric base(sigma);
    return beta == 1.0 ? base : Metric(matrix_power(base, beta));
}

Vector beta_spectrum(const SymmetricMatrix& sigma, double beta) {
    const Metric base(sigma);
    Vector out = base.decomposition().eigenvalues;
    for (double& l : out) l = std::pow(l, 1.0 - beta);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

Metric ipca_metric(const SymmetricMatrix& sigma) {
    Vector d = sigma.matrix().diagonal_entries();
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!(d[i] > 0.0)) {
            std::ostringstream os;
            os << "ipca_metric: variance of coordinate " << i << " is not positive (" << d[i] << ")";
            fail(ErrorKind::not_spd, os.str());
        }
    }
    return Metric::diagonal(d);
}

Matrix projector(const Matrix& loadings, const Metric& metric) {
    require(loadings.rows() == metric.dim(), ErrorKind::dimension_mismatch, "projector: dimension mismatch");
    return loadings * (loadings.transpose() * metric.matrix().matrix());
}

Matrix projector(const MapcaSolution& solution, const Metric& metric) { return projector(solution.loadings, metric); }

double constraint_residual(const Matrix& loadings, const Metric& metric, const Matrix& target) {
    require(loadings.rows() == metric.dim(), ErrorKind::dimension_mismatch, "constraint_residual: dimension mismatch");
    return max_abs_diff(loadings.transpose() * metric.matrix().matrix() * loadings, target);
}

double constraint_residual(const Matrix& loadings, const Metric& metric) {
    return constraint_residual(loadings, metric, Matrix::identity(loadings.cols()));
}

double eigen_residual(const SymmetricMatrix& sigma, const Metric& metric, const MapcaSolution& solution) {
    const Matrix sw = sigma.matrix() * solution.loadings;
    const Matrix mw = metric.matrix().matrix() * solution.loadings;
    double worst = 0.0;
    for (std::size_t j = 0; j < solution.loadings.cols(); ++j) {
        const double lambda = solution.eigenvalues[j];
        double r = 0.0;
        for (std::size_t i = 0; i < sw.rows(); ++i) r = std::max(r, std::abs(sw(i, j) - lambda * mw(i, j)));
        worst = std::max(worst, r / std::max(1.0, std::abs(lambda)));
    }
    return worst;
}

double objective(const Matrix& loadings, const SymmetricMatrix& sigma) {
    return trace(loadings.transpose() * sigma.matrix() * loadings);
}

MetricRule MetricRule::parse(const std::string& text) {
    if (text == "identity") return identity();
    if (text == "diag") return diag();
    if (text == "covariance" || text == "identity_rule") return covariance();
    if (text.rfind("beta=", 0) == 0) return beta(parse_real(text.substr(5), "metric rule"));
    if (text.rfind("beta(", 0) == 0 && text.size() > 6 && text.back() == ')')
        return beta(parse_real(text.substr(5, text.size() - 6), "metric rule"));
    fail(ErrorKind::malformed_input, "unknown metric rule '" + text + "'");
}

std::string MetricRule::name() const {
    switch (kind_) {
    case Kind::identity:
        return "identity";
    case Kind::diag:
        return "diag";
    case Kind::covariance:
        return "covariance";
    case Kind::beta: {
        std::ostringstream os;
        os.precision(17);
        os << "beta(" << beta_ << ")";
        return os.str();
    }
    }
    return "unknown";
}

Metric MetricRule::apply(const SymmetricMatrix& sigma) const {
    switch (kind_) {
    case Kind::identity:
        return Metric::identity(sigma.dim());
    case Kind::diag:
        return ipca_metric(sigma);
    case Kind::covariance:
        return Metric(sigma);
    case Kind::beta:
        return beta_metric(sigma, beta_);
    }
    fail(ErrorKind::invalid_argument, "MetricRule: unknown kind");
}

} // namespace mapca
