#include "mapca/kernels.hpp"

#include <atomic>

#include "mapca/error.hpp"

#ifdef MAPCA_HAS_OPENMP
#include <omp.h>
#endif

namespace mapca::kernels {

namespace {

std::atomic<Backend> g_backend{
#ifdef MAPCA_HAS_OPENMP
    Backend::parallel
#else
    Backend::serial
#endif
};

void check_multiply(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), ErrorKind::dimension_mismatch, "multiply: inner dimensions differ");
}

} // namespace

Backend default_backend() noexcept { return g_backend.load(std::memory_order_relaxed); }

void set_default_backend(Backend backend) noexcept { g_backend.store(backend, std::memory_order_relaxed); }

int thread_count() noexcept {
#ifdef MAPCA_HAS_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace serial {

Matrix multiply(const Matrix& a, const Matrix& b) {
    check_multiply(a, b);
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    }
    return c;
}

Matrix gram(const Matrix& a) {
    const std::size_t p = a.cols();
    Matrix g(p, p);
    for (std::size_t r = 0; r < p; ++r) {
        for (std::size_t s = r; s < p; ++s) {
            double acc = 0.0;
            for (std::size_t i = 0; i < a.rows(); ++i) acc += a(i, r) * a(i, s);
            g(r, s) = acc;
            g(s, r) = acc;
        }
    }
    return g;
}

Vector column_means(const Matrix& x) {
    Vector m(x.cols(), 0.0);
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) acc += x(i, j);
        m[j] = acc / static_cast<double>(x.rows());
    }
    return m;
}

Matrix centered_gram(const Matrix& x, std::span<const double> means) {
    require(means.size() == x.cols(), ErrorKind::dimension_mismatch, "centered_gram: mean length");
    const std::size_t p = x.cols();
    Matrix g(p, p);
    for (std::size_t r = 0; r < p; ++r) {
        for (std::size_t s = r; s < p; ++s) {
            double acc = 0.0;
            for (std::size_t i = 0; i < x.rows(); ++i) acc += (x(i, r) - means[r]) * (x(i, s) - means[s]);
            g(r, s) = acc;
            g(s, r) = acc;
        }
    }
    return g;
}

} // namespace serial

// The parallel versions reorder loops for locality but keep, for every output
// entry, the same ascending accumulation order as the serial reference.
namespace parallel {

Matrix multiply(const Matrix& a, const Matrix& b) {
    check_multiply(a, b);
    const auto n = static_cast<long long>(a.rows());
    const std::size_t inner = a.cols();
    const std::size_t m = b.cols();
    Matrix c(a.rows(), m);
#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        auto crow = c.row(i);
        for (std::size_t k = 0; k < inner; ++k) {
            const double aik = a(i, k);
            const auto brow = b.row(k);
            for (std::size_t j = 0; j < m; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Matrix gram(const Matrix& a) {
    const std::size_t p = a.cols();
    const auto pp = static_cast<long long>(p);
    Matrix g(p, p);
#pragma omp parallel for schedule(dynamic)
    for (long long rr = 0; rr < pp; ++rr) {
        const auto r = static_cast<std::size_t>(rr);
        auto grow = g.row(r);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            const auto arow = a.row(i);
            const double air = arow[r];
            for (std::size_t s = r; s < p; ++s) grow[s] += air * arow[s];
        }
    }
    for (std::size_t r = 0; r < p; ++r)
        for (std::size_t s = r + 1; s < p; ++s) g(s, r) = g(r, s);
    return g;
}

Vector column_means(const Matrix& x) {
    const auto p = static_cast<long long>(x.cols());
    Vector m(x.cols(), 0.0);
#pragma omp parallel for schedule(static)
    for (long long jj = 0; jj < p; ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        double acc = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) acc += x(i, j);
        m[j] = acc / static_cast<double>(x.rows());
    }
    return m;
}

Matrix centered_gram(const Matrix& x, std::span<const double> means) {
    require(means.size() == x.cols(), ErrorKind::dimension_mismatch, "centered_gram: mean length");
    const std::size_t p = x.cols();
    const auto pp = static_cast<long long>(p);
    Matrix g(p, p);
#pragma omp parallel for schedule(dynamic)
    for (long long rr = 0; rr < pp; ++rr) {
        const auto r = static_cast<std::size_t>(rr);
        auto grow = g.row(r);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const auto xrow = x.row(i);
            const double xr = xrow[r] - means[r];
            for (std::size_t s = r; s < p; ++s) grow[s] += xr * (xrow[s] - means[s]);
        }
    }
    for (std::size_t r = 0; r < p; ++r)
        for (std::size_t s = r + 1; s < p; ++s) g(s, r) = g(r, s);
    return g;
}

} // namespace parallel

Matrix multiply(const Matrix& a, const Matrix& b, Backend backend) {
    return backend == Backend::parallel ? parallel::multiply(a, b) : serial::multiply(a, b);
}

Matrix gram(const Matrix& a, Backend backend) {
    return backend == Backend::parallel ? parallel::gram(a) : serial::gram(a);
}

Vector column_means(const Matrix& x, Backend backend) {
    return backend == Backend::parallel ? parallel::column_means(x) : serial::column_means(x);
}

Matrix centered_gram(const Matrix& x, std::span<const double> means, Backend backend) {
    return backend == Backend::parallel ? parallel::centered_gram(x, means) : serial::centered_gram(x, means);
}

} // namespace mapca::kernels
