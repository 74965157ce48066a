#pragma once

// Data-parallel kernels. Every kernel has a plain serial reference in
// kernels::serial and an OpenMP version in kernels::parallel. Both sum each
// output entry in the same order, so their results are bit-identical; the
// tests rely on that.

#include <cstddef>
#include <exception>
#include <span>

#include "mapca/matrix.hpp"

namespace mapca::kernels {

enum class Backend { serial, parallel };

/// Process-wide default used by the dispatching entry points.
Backend default_backend() noexcept;
void set_default_backend(Backend backend) noexcept;

/// Number of threads the parallel backend will use (1 without OpenMP).
int thread_count() noexcept;

namespace serial {
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix gram(const Matrix& a);
Vector column_means(const Matrix& x);
Matrix centered_gram(const Matrix& x, std::span<const double> means);
} // namespace serial

namespace parallel {
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix gram(const Matrix& a);
Vector column_means(const Matrix& x);
Matrix centered_gram(const Matrix& x, std::span<const double> means);
} // namespace parallel

/// a * b
Matrix multiply(const Matrix& a, const Matrix& b, Backend backend = default_backend());
/// a^T a
Matrix gram(const Matrix& a, Backend backend = default_backend());
Vector column_means(const Matrix& x, Backend backend = default_backend());
/// (x - 1 m^T)^T (x - 1 m^T), the unnormalized scatter matrix.
Matrix centered_gram(const Matrix& x, std::span<const double> means, Backend backend = default_backend());

/// Runs body(i) for i in [0, n). The parallel backend distributes indices
/// over threads; body must not touch shared mutable state. If any
/// index throws, one of the exceptions is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t n, Body&& body, Backend backend = default_backend()) {
#ifdef MAPCA_HAS_OPENMP
    if (backend == Backend::parallel) {
        const auto count = static_cast<long long>(n);
        std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < count; ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(mapca_for_each_index)
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
        return;
    }
#else
    (void)backend;
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

} // namespace mapca::kernels
