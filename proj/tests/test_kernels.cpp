#include <doctest.h>

#include <atomic>
#include <algorithm>
#include <stdexcept>

#include "mapca/error.hpp"
#include "mapca/kernels.hpp"
#include "mapca/random.hpp"

using namespace mapca;

namespace {

Matrix naive_multiply(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            long double s = 0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += static_cast<long double>(a(i, k)) * b(k, j);
            c(i, j) = static_cast<double>(s);
        }
    return c;
}

} // namespace

TEST_CASE("serial and parallel kernels agree bit for bit") {
    Rng rng(11);
    for (auto [r, c] : {std::pair<std::size_t, std::size_t>{1, 1}, {7, 3}, {40, 12}, {129, 33}}) {
        const Matrix a = gaussian_matrix(rng, r, c);
        const Matrix b = gaussian_matrix(rng, c, r);
        CHECK(kernels::serial::multiply(a, b) == kernels::parallel::multiply(a, b));
        CHECK(kernels::serial::gram(a) == kernels::parallel::gram(a));
        const Vector ms = kernels::serial::column_means(a);
        CHECK(ms == kernels::parallel::column_means(a));
        CHECK(kernels::serial::centered_gram(a, ms) == kernels::parallel::centered_gram(a, ms));
    }
}

TEST_CASE("kernels match a long-double reference") {
    Rng rng(3);
    const Matrix a = gaussian_matrix(rng, 9, 5);
    const Matrix b = gaussian_matrix(rng, 5, 4);
    CHECK(max_abs_diff(kernels::multiply(a, b), naive_multiply(a, b)) < 1e-13);
    CHECK(max_abs_diff(kernels::gram(a), naive_multiply(a.transpose(), a)) < 1e-13);

    const Vector means = kernels::column_means(a);
    Matrix centered = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) centered(i, j) -= means[j];
    CHECK(max_abs_diff(kernels::centered_gram(a, means), naive_multiply(centered.transpose(), centered)) < 1e-13);
}

TEST_CASE("kernel shape checks") {
    CHECK_THROWS_AS(kernels::multiply(Matrix(2, 3), Matrix(2, 3)), Error);
}

TEST_CASE("for_each_index visits every index once and rethrows") {
    for (auto backend : {kernels::Backend::serial, kernels::Backend::parallel}) {
        std::vector<int> hits(257, 0);
        kernels::for_each_index(hits.size(), [&](std::size_t i) { hits[i] += 1; }, backend);
        CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));

        std::atomic<int> visited{0};
        CHECK_THROWS_AS(kernels::for_each_index(
                            50,
                            [&](std::size_t i) {
                                ++visited;
                                if (i == 17) throw std::runtime_error("boom");
                            },
                            backend),
                        std::runtime_error);
    }
}

TEST_CASE("default backend can be switched") {
    const auto before = kernels::default_backend();
    kernels::set_default_backend(kernels::Backend::serial);
    CHECK(kernels::default_backend() == kernels::Backend::serial);
    kernels::set_default_backend(before);
    CHECK(kernels::thread_count() >= 1);
}
