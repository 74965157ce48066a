#include "mapca/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mapca/error.hpp"

namespace mapca {

SymmetricMatrix::SymmetricMatrix(const Matrix& m, double tolerance) {
    require(m.square(), ErrorKind::dimension_mismatch, "SymmetricMatrix: matrix is not square");
    require(m.rows() >= 1, ErrorKind::dimension_mismatch, "SymmetricMatrix: dimension must be at least 1");
    const double scale = std::max(1.0, max_abs(m));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            if (!(std::abs(m(i, j) - m(j, i)) <= tolerance * scale)) {
                std::ostringstream os;
                os << "SymmetricMatrix: entries (" << i << "," << j << ") and (" << j << "," << i << ") differ";
                fail(ErrorKind::invalid_argument, os.str());
            }
        }
    }
    m_ = symmetrize(m).m_;
}

SymmetricMatrix SymmetricMatrix::symmetrize(const Matrix& m) {
    require(m.square() && m.rows() >= 1, ErrorKind::dimension_mismatch, "symmetrize: matrix is not square");
    Matrix s(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s(i, i) = m(i, i);
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    return SymmetricMatrix(std::move(s), Trusted{});
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
    require(n >= 1, ErrorKind::dimension_mismatch, "SymmetricMatrix: dimension must be at least 1");
    return SymmetricMatrix(Matrix::identity(n), Trusted{});
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> entries) {
    require(!entries.empty(), ErrorKind::dimension_mismatch, "SymmetricMatrix: dimension must be at least 1");
    return SymmetricMatrix(Matrix::diagonal(entries), Trusted{});
}

EigenDecomposition eigh(const SymmetricMatrix& s, const EighOptions& options) {
    const std::size_t n = s.dim();
    Matrix a = s.matrix();
    Matrix v = Matrix::identity(n);

    const double threshold = options.tolerance * frobenius_norm(a);
    auto off_norm = [&] {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) acc += 2.0 * a(i, j) * a(i, j);
        return std::sqrt(acc);
    };

    bool converged = false;
    for (int sweep = 0; sweep <= options.max_sweeps; ++sweep) {
        if (off_norm() <= threshold) {
            converged = true;
            break;
        }
        if (sweep == options.max_sweeps) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                const double tau = sn / (1.0 + c);

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    const double new_rp = arp - sn * (arq + tau * arp);
                    const double new_rq = arq + sn * (arp - tau * arq);
                    a(r, p) = new_rp;
                    a(p, r) = new_rp;
                    a(r, q) = new_rq;
                    a(q, r) = new_rq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = vrp - sn * (vrq + tau * vrp);
                    v(r, q) = vrq + sn * (vrp - tau * vrq);
                }
            }
        }
    }
    if (!converged) {
        std::ostringstream os;
        os << "eigh: Jacobi iteration did not converge in " << options.max_sweeps << " sweeps";
        fail(ErrorKind::no_convergence, os.str());
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    EigenDecomposition out{Vector(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
    }
    apply_sign_convention(out.eigenvectors);
    return out;
}

void apply_sign_convention(Matrix& vectors, double threshold) {
    for (std::size_t j = 0; j < vectors.cols(); ++j) {
        for (std::size_t i = 0; i < vectors.rows(); ++i) {
            const double x = vectors(i, j);
            if (std::abs(x) > threshold) {
                if (x < 0.0)
                    for (std::size_t r = 0; r < vectors.rows(); ++r) vectors(r, j) = -vectors(r, j);
                break;
            }
        }
    }
}

SymmetricMatrix spectral_function(const EigenDecomposition& eig, const std::function<double(double)>& f) {
    Vector fl(eig.eigenvalues.size());
    std::transform(eig.eigenvalues.begin(), eig.eigenvalues.end(), fl.begin(), f);
    const Matrix scaled = scale_cols(eig.eigenvectors, fl);
    return SymmetricMatrix::symmetrize(scaled * eig.eigenvectors.transpose());
}

namespace {

EigenDecomposition certified_spd(const SymmetricMatrix& m) {
    EigenDecomposition eig = eigh(m);
    const double lmax = eig.eigenvalues.front();
    const double lmin = eig.eigenvalues.back();
    if (!(lmin > 1e-12 * std::max(1.0, lmax))) {
        std::ostringstream os;
        os << "Metric: matrix is not positive definite (min eigenvalue " << lmin << ", max " << lmax << ")";
        fail(ErrorKind::not_spd, os.str());
    }
    return eig;
}

} // namespace

Metric::Metric(SymmetricMatrix m)
    : matrix_(std::move(m)),
      eig_(certified_spd(matrix_)),
      sqrt_(spectral_function(eig_, [](double l) { return std::sqrt(l); })),
      inv_sqrt_(spectral_function(eig_, [](double l) { return 1.0 / std::sqrt(l); })) {}

Metric Metric::identity(std::size_t n) { return Metric(SymmetricMatrix::identity(n)); }

Metric Metric::diagonal(std::span<const double> entries) { return Metric(SymmetricMatrix::diagonal(entries)); }

SymmetricMatrix matrix_power(const Metric& m, double beta) {
    if (beta == 1.0) return m.matrix();
    return spectral_function(m.decomposition(), [beta](double l) { return std::pow(l, beta); });
}

SqrtPair sqrt_and_invsqrt(const Metric& m) { return {m.sqrt(), m.inv_sqrt()}; }

double condition_number(const SymmetricMatrix& s) {
    const EigenDecomposition eig = eigh(s);
    const double lmin = eig.eigenvalues.back();
    require(lmin > 0.0, ErrorKind::not_spd, "condition_number: matrix is not positive definite");
    return eig.eigenvalues.front() / lmin;
}

bool is_psd(const SymmetricMatrix& s, double tolerance) {
    const EigenDecomposition eig = eigh(s);
    const double scale = std::max({1.0, std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back())});
    return eig.eigenvalues.back() >= -tolerance * scale;
}

} // namespace mapca
