#include <doctest.h>

#include "mapca/error.hpp"
#include "mapca/random.hpp"
#include "mapca/unique.hpp"

using namespace mapca;
using namespace mapca::unique;

TEST_CASE("half vectorization round trip") {
    CHECK(half_dim(3) == 6);
    for (std::size_t p = 1; p <= 5; ++p)
        for (std::size_t k = 0; k < half_dim(p); ++k) {
            const auto [i, j] = half_entry(p, k);
            CHECK(i <= j);
            CHECK(half_index(p, i, j) == k);
            CHECK(half_index(p, j, i) == k);
        }
    Rng rng(1);
    const SymmetricMatrix s = random_spd(rng, 4);
    CHECK(from_half_vector(half_vectorize(s), 4) == s);
    CHECK_THROWS_AS(from_half_vector(Vector(3), 4), Error);
}

TEST_CASE("condition checks on known maps") {
    const ConditionReport diag = check_conditions(diag_extractor(4), 10, 1);
    CHECK(diag.equivariant);
    CHECK(diag.diagonal_valued);
    CHECK(diag.normalized);

    const ConditionReport id = check_conditions(LinearMetricMap::identity(3), 10, 1);
    CHECK(id.equivariant);
    CHECK(id.normalized);
    CHECK_FALSE(id.diagonal_valued);

    const ConditionReport tr = check_conditions(trace_map(3), 10, 1);
    CHECK_FALSE(tr.equivariant);

    Rng rng(2);
    const SymmetricMatrix a = random_spd(rng, 3);
    CHECK(check_conditions(schur_map(a), 10, 1).equivariant);
}

TEST_CASE("uniqueness oracle") {
    for (std::size_t p : {2u, 3u, 4u}) {
        const UniquenessResult r = solve_uniqueness({.p = p, .seed = 3});
        CHECK(r.homogeneous_dim == p);
        CHECK(r.solution_space_dim == 0);
        CHECK(r.max_deviation_from_diag < 1e-8);
        CHECK(r.residual < 1e-8);
    }
    const UniquenessResult s = solve_uniqueness({.p = 3, .seed = 3, .signed_scalings = true});
    CHECK(s.solution_space_dim == 0);
    CHECK(s.max_deviation_from_diag < 1e-8);
}

TEST_CASE("uniqueness oracle detects insufficient sampling") {
    try {
        solve_uniqueness({.p = 3, .n_sigma = 1, .n_scaling = 1, .seed = 3});
        FAIL("expected rank deficiency");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::rank_deficient);
    }
    CHECK_THROWS_AS(solve_uniqueness({.p = 1}), Error);
    CHECK_THROWS_AS(solve_uniqueness({.p = 7}), Error);
}

TEST_CASE("Schur-class projection") {
    Rng rng(4);
    const SymmetricMatrix a = random_spd(rng, 3);
    const SchurProjection sp = schur_class_projection(schur_map(a), 6, 5);
    CHECK(sp.is_schur);
    REQUIRE(sp.coefficients.has_value());
    CHECK(max_abs_diff(sp.coefficients->matrix(), a.matrix()) < 1e-9);
    CHECK(sp.psd);
    CHECK_FALSE(schur_class_projection(trace_map(3), 6, 5).is_schur);
}

TEST_CASE("permutation equivariance") {
    CHECK(permutation_equivariance_check(diag_extractor(4), 6).pass);
    Rng rng(6);
    CHECK_FALSE(permutation_equivariance_check(schur_map(random_spd(rng, 4)), 6).pass);
}
