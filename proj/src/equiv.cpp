#include "mapca/equiv.hpp"

#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include "mapca/error.hpp"

namespace mapca::equiv {

DiagonalScaling::DiagonalScaling(Vector entries, bool positive_only)
    : entries_(std::move(entries)), positive_only_(positive_only) {
    require(!entries_.empty(), ErrorKind::invalid_argument, "DiagonalScaling: empty");
    for (double c : entries_) {
        require(std::isfinite(c) && c != 0.0, ErrorKind::invalid_argument, "DiagonalScaling: entries must be nonzero");
        require(!positive_only_ || c > 0.0, ErrorKind::invalid_argument,
                "DiagonalScaling: entries must be positive");
    }
}

DiagonalScaling DiagonalScaling::uniform(std::size_t p, double c) { return DiagonalScaling(Vector(p, c), c > 0.0); }

DiagonalScaling DiagonalScaling::random(Rng& rng, std::size_t p, double lo, double hi, bool allow_signs) {
    Vector c(p);
    for (double& x : c) {
        x = rng.log_uniform(lo, hi);
        if (allow_signs && rng.coin()) x = -x;
    }
    return DiagonalScaling(std::move(c), !allow_signs);
}

Vector DiagonalScaling::inverse_entries() const {
    Vector inv(entries_.size());
    for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / entries_[i];
    return inv;
}

SymmetricMatrix DiagonalScaling::apply(const SymmetricMatrix& s) const {
    require(s.dim() == dim(), ErrorKind::dimension_mismatch, "DiagonalScaling: dimension mismatch");
    Matrix out(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) out(i, j) = entries_[i] * s(i, j) * entries_[j];
    return SymmetricMatrix::symmetrize(out);
}

CongruenceTransform::CongruenceTransform(Matrix p) : p_(std::move(p)) {
    require(p_.square() && p_.rows() >= 1, ErrorKind::dimension_mismatch, "CongruenceTransform: matrix is not square");
    require(std::abs(determinant(p_)) > 1e-12, ErrorKind::invalid_argument,
            "CongruenceTransform: matrix is numerically singular");
}

MOrthogonalElement::MOrthogonalElement(Matrix q, Metric metric) : q_(std::move(q)), metric_(std::move(metric)) {
    require(q_.rows() == metric_.dim() && q_.cols() == metric_.dim(), ErrorKind::dimension_mismatch,
            "MOrthogonalElement: dimension mismatch");
    const Matrix& m = metric_.matrix().matrix();
    const double dev = max_abs_diff(q_.transpose() * m * q_, m);
    require(dev <= 1e-9 * std::max(1.0, max_abs(m)), ErrorKind::invalid_argument,
            "MOrthogonalElement: Q^T M Q differs from M");
}

std::pair<SymmetricMatrix, Metric> apply_congruence(const SymmetricMatrix& sigma, const Metric& metric,
                                                    const CongruenceTransform& p) {
    const Matrix& pm = p.matrix();
    require(pm.rows() == sigma.dim() && sigma.dim() == metric.dim(), ErrorKind::dimension_mismatch,
            "apply_congruence: dimension mismatch");
    const Matrix pt = pm.transpose();
    SymmetricMatrix s = SymmetricMatrix::symmetrize(pm * sigma.matrix() * pt);
    Metric m(SymmetricMatrix::symmetrize(pm * metric.matrix().matrix() * pt));
    return {std::move(s), std::move(m)};
}

double relative_spectrum_deviation(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), ErrorKind::dimension_mismatch, "spectrum deviation: length mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
    return worst;
}

std::vector<std::pair<std::size_t, std::size_t>> eigenvalue_groups(std::span<const double> values, double gap) {
    std::vector<std::pair<std::size_t, std::size_t>> groups;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= values.size(); ++i) {
        const bool split =
            i == values.size() ||
            std::abs(values[i] - values[i - 1]) >= gap * std::max(1.0, std::abs(values[i - 1]));
        if (split) {
            groups.emplace_back(start, i);
            start = i;
        }
    }
    return groups;
}

namespace {

Vector unit(std::span<const double> v) {
    const double n = norm2(v);
    Vector out(v.begin(), v.end());
    for (double& x : out) x /= n;
    return out;
}

double aligned_deviation(std::span<const double> a, std::span<const double> b) {
    const double sign = dot(a, b) >= 0.0 ? 1.0 : -1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - sign * b[i]));
    return worst;
}

} // namespace

EquivarianceReport check_scale_equivariance(const SymmetricMatrix& sigma, const MetricRule& rule,
                                            const DiagonalScaling& c, std::uint64_t seed, double tolerance) {
    const std::size_t p = sigma.dim();
    require(c.dim() == p, ErrorKind::dimension_mismatch, "check_scale_equivariance: dimension mismatch");

    const Metric metric = rule.apply(sigma);
    const MapcaSolution base = solve(MapcaProblem(sigma, metric, p));
    const SymmetricMatrix sigma_t = c.apply(sigma);
    const Metric metric_t = rule.apply(sigma_t);
    const MapcaSolution moved = solve(MapcaProblem(sigma_t, metric_t, p));

    EquivarianceReport r;
    r.rule = rule.name();
    r.p = p;
    r.seed = seed;

    const Vector& lam = base.eigenvalues;
    const Vector& lam_t = moved.eigenvalues;
    r.strict_spectrum_deviation = relative_spectrum_deviation(lam_t, lam);
    const double total = std::accumulate(lam.begin(), lam.end(), 0.0);
    const double total_t = std::accumulate(lam_t.begin(), lam_t.end(), 0.0);
    r.scale_factor = total > 0.0 ? total_t / total : 1.0;
    Vector scaled = lam;
    for (double& l : scaled) l *= r.scale_factor;
    r.spectrum_deviation = relative_spectrum_deviation(lam_t, scaled);

    const Vector cinv = c.inverse_entries();
    const Matrix expected = scale_rows(base.loadings, cinv);
    const auto groups = eigenvalue_groups(lam);
    r.projector_comparison = groups.size() != lam.size();

    if (!r.projector_comparison) {
        for (std::size_t j = 0; j < p; ++j) {
            const Vector a = moved.loadings.column(j);
            const Vector b = expected.column(j);
            r.strict_loading_deviation =
                std::max(r.strict_loading_deviation, aligned_deviation(a, b) / std::max(max_abs(b), 1e-300));
            r.loading_deviation = std::max(r.loading_deviation, aligned_deviation(unit(a), unit(b)));
        }
    } else {
        // P~_g = C^{-1} P_g C for every eigenvalue group g.
        for (const auto& [first, last] : groups) {
            const std::size_t count = last - first;
            const Matrix pg = projector(base.loadings.columns(first, count), metric);
            const Matrix pg_t = projector(moved.loadings.columns(first, count), metric_t);
            const Matrix predicted = scale_cols(scale_rows(pg, cinv), c.entries());
            const double dev = max_abs_diff(pg_t, predicted);
            r.strict_loading_deviation = std::max(r.strict_loading_deviation, dev);
            r.loading_deviation = std::max(r.loading_deviation, dev);
        }
    }

    r.pass = r.spectrum_deviation <= tolerance && r.loading_deviation <= tolerance;
    r.strict_pass = r.strict_spectrum_deviation <= tolerance && r.strict_loading_deviation <= tolerance;
    return r;
}

std::pair<double, double> tensorial_deviation(const SymmetricMatrix& sigma, const DiagonalScaling& c, double beta) {
    const Matrix n1 = matrix_power(Metric(c.apply(sigma)), beta).matrix();
    const Matrix n2 = c.apply(matrix_power(Metric(sigma), beta)).matrix();
    const double literal = max_abs_diff(n1, n2);
    const double scale_free = max_abs_diff((1.0 / frobenius_norm(n1)) * n1, (1.0 / frobenius_norm(n2)) * n2);
    return {scale_free, literal};
}

Counterexample beta_counterexample_search(std::size_t p, double beta, std::size_t trials, std::uint64_t seed,
                                          ScalingMode mode) {
    require(p >= 2, ErrorKind::invalid_argument, "beta_counterexample_search: p must be at least 2");
    require(trials >= 1, ErrorKind::invalid_argument, "beta_counterexample_search: at least one trial");
    Rng rng(seed);
    std::optional<Counterexample> best;
    for (std::size_t t = 0; t < trials; ++t) {
        SymmetricMatrix sigma = random_spd(rng, p);
        DiagonalScaling c = mode == ScalingMode::uniform ? DiagonalScaling::uniform(p, rng.log_uniform(0.2, 5.0))
                                                         : DiagonalScaling::random(rng, p, 0.2, 5.0);
        const auto [dev, literal] = tensorial_deviation(sigma, c, beta);
        if (!best || dev > best->deviation) best = Counterexample{std::move(sigma), std::move(c), dev, literal};
    }
    return std::move(*best);
}

MOrthogonalElement m_orthogonal_from(const Metric& metric, const Matrix& r) {
    require(r.rows() == metric.dim() && r.square(), ErrorKind::dimension_mismatch,
            "m_orthogonal_from: dimension mismatch");
    require(max_abs_diff(r.transpose() * r, Matrix::identity(r.rows())) <= 1e-10, ErrorKind::invalid_argument,
            "m_orthogonal_from: R is not orthogonal");
    Matrix q = metric.inv_sqrt().matrix() * r * metric.sqrt().matrix();
    return MOrthogonalElement(std::move(q), metric);
}

MOrthogonalElement sample_m_orthogonal(const Metric& metric, std::uint64_t seed) {
    Rng rng(seed);
    return m_orthogonal_from(metric, random_orthogonal(rng, metric.dim()));
}

MapcaSolution gauge_action(const MapcaSolution& solution, const Matrix& r, const Metric& metric) {
    const std::size_t k = solution.loadings.cols();
    require(r.rows() == k && r.cols() == k, ErrorKind::dimension_mismatch, "gauge_action: R must be k x k");
    require(max_abs_diff(r.transpose() * r, Matrix::identity(k)) <= 1e-10, ErrorKind::invalid_argument,
            "gauge_action: R is not orthogonal");
    require(solution.loadings.rows() == metric.dim(), ErrorKind::dimension_mismatch,
            "gauge_action: metric dimension mismatch");
    MapcaSolution out = solution;
    out.loadings = solution.loadings * r;
    out.whitened_loadings = solution.whitened_loadings * r;
    return out;
}

} // namespace mapca::equiv
