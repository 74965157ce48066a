#include "mapca/unique.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mapca/error.hpp"
#include "mapca/kernels.hpp"
#include "mapca/random.hpp"

namespace mapca::unique {

std::size_t half_dim(std::size_t p) noexcept { return p * (p + 1) / 2; }

std::size_t half_index(std::size_t p, std::size_t i, std::size_t j) noexcept {
    if (i > j) std::swap(i, j);
    // rows 0..i-1 contribute p, p-1, ..., p-i+1 entries
    return i * p - i * (i - 1) / 2 + (j - i);
}

std::pair<std::size_t, std::size_t> half_entry(std::size_t p, std::size_t index) noexcept {
    std::size_t i = 0;
    while (index >= p - i) {
        index -= p - i;
        ++i;
    }
    return {i, i + index};
}

Vector half_vectorize(const SymmetricMatrix& s) {
    const std::size_t p = s.dim();
    Vector v;
    v.reserve(half_dim(p));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) v.push_back(s(i, j));
    return v;
}

SymmetricMatrix from_half_vector(std::span<const double> v, std::size_t p) {
    require(v.size() == half_dim(p), ErrorKind::dimension_mismatch, "from_half_vector: length mismatch");
    Matrix m(p, p);
    std::size_t k = 0;
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j, ++k) {
            m(i, j) = v[k];
            m(j, i) = v[k];
        }
    }
    return SymmetricMatrix(m, 0.0);
}

LinearMetricMap::LinearMetricMap(std::size_t p, Matrix coefficients) : p_(p), coefficients_(std::move(coefficients)) {
    require(p_ >= 1, ErrorKind::invalid_argument, "LinearMetricMap: p must be at least 1");
    const std::size_t d = half_dim(p_);
    require(coefficients_.rows() == d && coefficients_.cols() == d, ErrorKind::dimension_mismatch,
            "LinearMetricMap: coefficient matrix must be d x d with d = p(p+1)/2");
}

LinearMetricMap LinearMetricMap::identity(std::size_t p) { return LinearMetricMap(p, Matrix::identity(half_dim(p))); }

SymmetricMatrix LinearMetricMap::apply(const SymmetricMatrix& s) const {
    require(s.dim() == p_, ErrorKind::dimension_mismatch, "LinearMetricMap: dimension mismatch");
    return from_half_vector(coefficients_ * half_vectorize(s), p_);
}

LinearMetricMap schur_map(const SymmetricMatrix& a) {
    const std::size_t p = a.dim();
    return LinearMetricMap(p, Matrix::diagonal(half_vectorize(a)));
}

LinearMetricMap diag_extractor(std::size_t p) { return schur_map(SymmetricMatrix::identity(p)); }

LinearMetricMap trace_map(std::size_t p) {
    const std::size_t d = half_dim(p);
    Matrix f(d, d);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) f(half_index(p, i, i), half_index(p, j, j)) = 1.0;
    return LinearMetricMap(p, std::move(f));
}

namespace {

double relative_violation(const Matrix& got, const Matrix& want) {
    return max_abs_diff(got, want) / std::max(1.0, max_abs(want));
}

// Covariance samples G G^T + 0.1 I and scalings log-uniform in [0.2, 5].
SymmetricMatrix sample_sigma(Rng& rng, std::size_t p) {
    const Matrix g = gaussian_matrix(rng, p, p);
    Matrix s = g * g.transpose();
    for (std::size_t i = 0; i < p; ++i) s(i, i) += 0.1;
    return SymmetricMatrix::symmetrize(s);
}

Vector sample_scaling(Rng& rng, std::size_t p, bool allow_signs) {
    Vector c(p);
    for (double& x : c) {
        x = rng.log_uniform(0.2, 5.0);
        if (allow_signs && rng.coin()) x = -x;
    }
    return c;
}

SymmetricMatrix congruence_by_diagonal(const SymmetricMatrix& s, std::span<const double> c) {
    Matrix out(s.dim(), s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i)
        for (std::size_t j = 0; j < s.dim(); ++j) out(i, j) = c[i] * s(i, j) * c[j];
    return SymmetricMatrix::symmetrize(out);
}

void append_normalized(std::vector<double>& rows, std::span<const double> row) {
    const double n = norm2(row);
    if (n == 0.0) return;
    for (double x : row) rows.push_back(x / n);
}

std::size_t count_null(const Vector& eigenvalues, double threshold) {
    const double top = std::max(eigenvalues.front(), 0.0);
    return static_cast<std::size_t>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                                  [&](double l) { return l <= threshold * top; }));
}

} // namespace

ConditionReport check_conditions(const LinearMetricMap& f, std::size_t trials, std::uint64_t seed, double tolerance) {
    const std::size_t p = f.p();
    Rng rng(seed);
    ConditionReport r;
    for (std::size_t t = 0; t < trials; ++t) {
        const SymmetricMatrix sigma = sample_sigma(rng, p);
        const Vector c = sample_scaling(rng, p, t % 2 == 1);
        const SymmetricMatrix image = f.apply(sigma);
        const SymmetricMatrix lhs = f.apply(congruence_by_diagonal(sigma, c));
        const SymmetricMatrix rhs = congruence_by_diagonal(image, c);
        r.equivariance_violation = std::max(r.equivariance_violation, relative_violation(lhs.matrix(), rhs.matrix()));

        double off = 0.0;
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j)
                if (i != j) off = std::max(off, std::abs(image(i, j)));
        r.diagonal_violation = std::max(r.diagonal_violation, off / std::max(1.0, max_abs(image.matrix())));
    }
    r.normalization_violation = max_abs_diff(f.apply(SymmetricMatrix::identity(p)).matrix(), Matrix::identity(p));
    r.equivariant = r.equivariance_violation <= tolerance;
    r.diagonal_valued = r.diagonal_violation <= tolerance;
    r.normalized = r.normalization_violation <= tolerance;
    return r;
}

UniquenessResult solve_uniqueness(const UniquenessOptions& options) {
    const std::size_t p = options.p;
    require(p >= 2 && p <= 6, ErrorKind::invalid_argument, "solve_uniqueness: p must lie in [2, 6]");
    const std::size_t d = half_dim(p);
    const std::size_t unknowns = d * d;
    const std::size_t n_sigma = options.n_sigma ? options.n_sigma : 2 * d;
    const std::size_t n_scaling = options.n_scaling ? options.n_scaling : 2 * p;

    Rng rng(options.seed);
    std::vector<Vector> sigmas;
    std::vector<Vector> scale_weights; // c_i c_j per half-vector coordinate
    for (std::size_t s = 0; s < n_sigma; ++s) sigmas.push_back(half_vectorize(sample_sigma(rng, p)));
    for (std::size_t s = 0; s < n_scaling; ++s) {
        const Vector c = sample_scaling(rng, p, options.signed_scalings);
        Vector k(d);
        for (std::size_t idx = 0; idx < d; ++idx) {
            const auto [i, j] = half_entry(p, idx);
            k[idx] = c[i] * c[j];
        }
        scale_weights.push_back(std::move(k));
    }

    // Unknown F(r, c) sits at column r * d + c. Each row is one scalar
    // equation, normalized to unit length.
    std::vector<double> rows;
    Vector eq(unknowns);
    // (i): F (K s) = K (F s) with K = diag(c_i c_j), i.e. for every output
    // coordinate r: sum_c F(r, c) (k_c - k_r) s_c = 0.
    for (const Vector& s : sigmas) {
        for (const Vector& k : scale_weights) {
            for (std::size_t r = 0; r < d; ++r) {
                std::fill(eq.begin(), eq.end(), 0.0);
                for (std::size_t c = 0; c < d; ++c) eq[r * d + c] = (k[c] - k[r]) * s[c];
                append_normalized(rows, eq);
            }
        }
    }
    // (ii): every off-diagonal output coordinate vanishes.
    for (const Vector& s : sigmas) {
        for (std::size_t r = 0; r < d; ++r) {
            const auto [i, j] = half_entry(p, r);
            if (i == j) continue;
            std::fill(eq.begin(), eq.end(), 0.0);
            for (std::size_t c = 0; c < d; ++c) eq[r * d + c] = s[c];
            append_normalized(rows, eq);
        }
    }
    const std::size_t homogeneous_rows = rows.size() / unknowns;
    const Matrix h(homogeneous_rows, unknowns, std::move(rows));

    // (iii): F vech(I) = vech(I).
    const Vector ident = half_vectorize(SymmetricMatrix::identity(p));
    Matrix g(d, unknowns);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) g(r, r * d + c) = ident[c];

    const Matrix normal_h = kernels::gram(h);
    const EigenDecomposition eig_h = eigh(SymmetricMatrix::symmetrize(normal_h));
    const std::size_t homogeneous_dim = count_null(eig_h.eigenvalues, options.singular_threshold);
    if (homogeneous_dim > p) {
        std::ostringstream os;
        os << "solve_uniqueness: constraints (i)+(ii) leave " << homogeneous_dim << " free directions, expected at most "
           << p << "; increase the sample counts";
        fail(ErrorKind::rank_deficient, os.str());
    }

    const EigenDecomposition eig_full = eigh(SymmetricMatrix::symmetrize(normal_h + kernels::gram(g)));
    const std::size_t full_dim = count_null(eig_full.eigenvalues, options.singular_threshold);
    const Vector rhs = g.transpose() * ident;

    // Minimum-norm least-squares solution through the eigenbasis.
    const double cutoff = options.singular_threshold * eig_full.eigenvalues.front();
    Vector x(unknowns, 0.0);
    for (std::size_t m = 0; m < unknowns; ++m) {
        const double l = eig_full.eigenvalues[m];
        if (l <= cutoff) continue;
        double proj = 0.0;
        for (std::size_t i = 0; i < unknowns; ++i) proj += eig_full.eigenvectors(i, m) * rhs[i];
        const double coef = proj / l;
        for (std::size_t i = 0; i < unknowns; ++i) x[i] += coef * eig_full.eigenvectors(i, m);
    }

    Matrix coeffs(d, d, x);
    const LinearMetricMap reference = diag_extractor(p);
    double residual = max_abs(h * std::span<const double>(x));
    const Vector gx = g * std::span<const double>(x);
    residual = std::max(residual, max_abs_diff(gx, ident));

    return UniquenessResult{
        .p = p,
        .homogeneous_dim = homogeneous_dim,
        .solution_space_dim = full_dim,
        .solution = LinearMetricMap(p, coeffs),
        .max_deviation_from_diag = max_abs_diff(coeffs, reference.coefficients()),
        .residual = residual,
        .equation_count = homogeneous_rows + d,
    };
}

SchurProjection schur_class_projection(const LinearMetricMap& f, std::size_t trials, std::uint64_t seed,
                                       double tolerance) {
    const std::size_t p = f.p();
    const std::size_t d = half_dim(p);
    // Coordinate r of f(basis_r) is the candidate a_r.
    Vector a(d);
    for (std::size_t r = 0; r < d; ++r) a[r] = f.coefficients()(r, r);
    const SymmetricMatrix candidate = from_half_vector(a, p);

    Rng rng(seed);
    SchurProjection out;
    for (std::size_t t = 0; t < trials; ++t) {
        const SymmetricMatrix sigma = sample_sigma(rng, p);
        const Matrix got = f.apply(sigma).matrix();
        out.validation_residual =
            std::max(out.validation_residual, relative_violation(got, hadamard(candidate.matrix(), sigma.matrix())));
    }
    out.is_schur = out.validation_residual <= tolerance;
    if (out.is_schur) {
        out.psd = is_psd(candidate);
        out.coefficients = candidate;
    }
    return out;
}

PermutationReport permutation_equivariance_check(const LinearMetricMap& f, std::uint64_t seed, double tolerance) {
    const std::size_t p = f.p();
    Rng rng(seed);
    std::vector<std::vector<std::size_t>> perms;
    for (std::size_t i = 0; i + 1 < p; ++i) {
        std::vector<std::size_t> perm(p);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::swap(perm[i], perm[i + 1]);
        perms.push_back(std::move(perm));
    }
    for (int t = 0; t < 4; ++t) {
        std::vector<std::size_t> perm(p);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng.engine());
        perms.push_back(std::move(perm));
    }

    // (P S P^T)_{ij} = S_{perm[i], perm[j]}
    auto permute = [p](const SymmetricMatrix& s, const std::vector<std::size_t>& perm) {
        Matrix out(p, p);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) out(i, j) = s(perm[i], perm[j]);
        return SymmetricMatrix(out, 0.0);
    };

    PermutationReport r;
    for (const auto& perm : perms) {
        for (int t = 0; t < 2; ++t) {
            const SymmetricMatrix sigma = sample_sigma(rng, p);
            const Matrix lhs = f.apply(permute(sigma, perm)).matrix();
            const Matrix rhs = permute(f.apply(sigma), perm).matrix();
            r.violation = std::max(r.violation, relative_violation(lhs, rhs));
        }
    }
    r.pass = r.violation <= tolerance;
    return r;
}

} // namespace mapca::unique
