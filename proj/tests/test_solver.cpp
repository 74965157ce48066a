#include <doctest.h>

#include <cmath>

#include "mapca/error.hpp"
#include "mapca/random.hpp"
#include "mapca/solver.hpp"
#include "oracle.hpp"

using namespace mapca;

namespace {

DataMatrix small_data() {
    return DataMatrix(Matrix{{2, 1}, {-2, 1}, {2, -1}, {-2, -1}, {0, 0}});
}

SymmetricMatrix correlation(const SymmetricMatrix& s) {
    const std::size_t p = s.dim();
    Matrix r(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) r(i, j) = s(i, j) / std::sqrt(s(i, i) * s(j, j));
    return SymmetricMatrix::symmetrize(r);
}

} // namespace

TEST_CASE("covariance of a hand-built data set") {
    const SymmetricMatrix s = covariance(small_data());
    CHECK(s(0, 0) == 4.0);
    CHECK(s(1, 1) == 1.0);
    CHECK(s(0, 1) == 0.0);
    const SymmetricMatrix pop = covariance(small_data(), Divisor::n);
    CHECK(pop(0, 0) == doctest::Approx(3.2));
    CHECK_THROWS_AS(DataMatrix(Matrix(1, 3)), Error);
}

TEST_CASE("identity metric on diag(4,1) gives the first axis") {
    const SymmetricMatrix s = covariance(small_data());
    const MapcaSolution sol = solve(MapcaProblem(s, Metric::identity(2), 1));
    REQUIRE(sol.eigenvalues.size() == 1);
    CHECK(sol.eigenvalues[0] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(sol.loadings(0, 0) == doctest::Approx(1.0));
    CHECK(sol.loadings(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("generalized solve agrees with the Eigen oracle") {
    Rng rng(77);
    for (int t = 0; t < 20; ++t) {
        const std::size_t p = 2 + rng.index(8);
        const SymmetricMatrix sigma = random_spd(rng, p);
        const Metric m(random_spd(rng, p));
        const MapcaSolution sol = solve(MapcaProblem(sigma, m, p));
        const oracle::Eig ref = oracle::generalized_eig(sigma, m.matrix());
        CHECK(oracle::relative_max_diff(sol.eigenvalues, ref.values) < 1e-10);
        if (oracle::min_relative_gap(ref.values) > 1e-6)
            CHECK(oracle::column_sign_diff(sol.loadings, ref.vectors) < 1e-7 * std::max(1.0, max_abs(ref.vectors)));
        CHECK(constraint_residual(sol.loadings, m) < 1e-10);
        CHECK(eigen_residual(sigma, m, sol) < 1e-10);
        CHECK(max_abs_diff(sol.whitened_loadings.transpose() * sol.whitened_loadings, Matrix::identity(p)) < 1e-10);
    }
}

TEST_CASE("smallest end returns ascending eigenvalues") {
    const SymmetricMatrix s = SymmetricMatrix::diagonal(Vector{3.0, 1.0, 2.0});
    const MapcaSolution sol = solve(MapcaProblem(s, Metric::identity(3), 2), SpectrumEnd::smallest);
    CHECK(sol.eigenvalues == Vector{1.0, 2.0});
}

TEST_CASE("problem validation") {
    const SymmetricMatrix s = SymmetricMatrix::identity(3);
    CHECK_THROWS_AS(MapcaProblem(s, Metric::identity(2), 1), Error);
    CHECK_THROWS_AS(MapcaProblem(s, Metric::identity(3), 4), Error);
    CHECK_THROWS_AS(MapcaProblem(s, Metric::identity(3), 0), Error);
}

TEST_CASE("beta family spectra") {
    Rng rng(9);
    const SymmetricMatrix sigma = random_spd(rng, 5);
    const Vector lambda = oracle::symmetric_eig(sigma).values;
    for (double beta : {0.0, 0.25, 0.5, 0.8, 1.0}) {
        const Vector got = beta_spectrum(sigma, beta);
        Vector want(lambda.size());
        for (std::size_t i = 0; i < want.size(); ++i) want[i] = std::pow(lambda[i], 1.0 - beta);
        CHECK(oracle::relative_max_diff(got, want) < 1e-10);
    }
    CHECK(beta_metric(sigma, 0.0).matrix() == SymmetricMatrix::identity(5));
    CHECK(beta_metric(sigma, 1.0).matrix() == sigma);
}

TEST_CASE("IPCA spectrum equals the correlation spectrum") {
    Rng rng(10);
    const SymmetricMatrix sigma = random_spd(rng, 6);
    const MapcaSolution sol = solve(MapcaProblem(sigma, ipca_metric(sigma), 6));
    CHECK(oracle::relative_max_diff(sol.eigenvalues, oracle::symmetric_eig(correlation(sigma)).values) < 1e-12);
    CHECK_THROWS_AS(ipca_metric(SymmetricMatrix::diagonal(Vector{1.0, 0.0})), Error);
}

TEST_CASE("objective, projector and gauge invariance") {
    Rng rng(12);
    const SymmetricMatrix sigma = random_spd(rng, 4);
    const Metric m(random_spd(rng, 4));
    const MapcaSolution sol = solve(MapcaProblem(sigma, m, 2));
    double sum = 0.0;
    for (double l : sol.eigenvalues) sum += l;
    CHECK(objective(sol.loadings, sigma) == doctest::Approx(sum).epsilon(1e-12));
    const Matrix proj = projector(sol, m);
    CHECK(max_abs_diff(proj * proj, proj) < 1e-10);
}

TEST_CASE("metric rule parsing") {
    CHECK(MetricRule::parse("diag").kind() == MetricRule::Kind::diag);
    CHECK(MetricRule::parse("identity").kind() == MetricRule::Kind::identity);
    CHECK(MetricRule::parse("covariance").kind() == MetricRule::Kind::covariance);
    CHECK(MetricRule::parse("beta=0.5").exponent() == 0.5);
    CHECK(MetricRule::parse("beta(0.25)").exponent() == 0.25);
    CHECK_THROWS_AS(MetricRule::parse("beta=abc"), Error);
    CHECK_THROWS_AS(MetricRule::parse("beta=nan"), Error);
    CHECK_THROWS_AS(MetricRule::parse("cosine"), Error);

    const SymmetricMatrix s = covariance(small_data());
    CHECK(MetricRule::diag().apply(s).matrix() == SymmetricMatrix::diagonal(Vector{4.0, 1.0}));
    CHECK(MetricRule::identity().apply(s).matrix() == SymmetricMatrix::identity(2));
}

TEST_CASE("diag(4,1) under the three canonical metrics") {
    const SymmetricMatrix s = covariance(small_data());
    auto spectrum = [&](const Metric& m) { return solve(MapcaProblem(s, m, 2)).eigenvalues; };
    CHECK(spectrum(Metric::identity(2)) == Vector{4.0, 1.0});
    CHECK(oracle::relative_max_diff(spectrum(ipca_metric(s)), Vector{1.0, 1.0}) < 1e-15);
    CHECK(oracle::relative_max_diff(spectrum(beta_metric(s, 1.0)), Vector{1.0, 1.0}) < 1e-15);
}
