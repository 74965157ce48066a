#include <doctest.h>

#include <sstream>

#include "mapca/error.hpp"
#include "mapca/graphspec.hpp"
#include "oracle.hpp"

using namespace mapca;
using namespace mapca::graph;

namespace {

WeightedGraph parse(const std::string& text) {
    std::istringstream in(text);
    return WeightedGraph::parse_edge_list(in);
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::invalid_argument;
}

void check_close(const Vector& got, const Vector& want, double tol) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= tol);
}

} // namespace

TEST_CASE("edge list parsing") {
    const WeightedGraph g = parse("# path\n0 1\n\n1 2 2.5\n");
    CHECK(g.vertex_count() == 3);
    REQUIRE(g.edges().size() == 2);
    CHECK(g.edges()[1].weight == 2.5);
    CHECK(g.degrees() == Vector{1.0, 3.5, 2.5});

    CHECK(kind_of([] { parse("0 1 x\n"); }) == ErrorKind::malformed_input);
    CHECK(kind_of([] { parse("0\n"); }) == ErrorKind::malformed_input);
    CHECK(kind_of([] { parse("0 -1\n"); }) == ErrorKind::malformed_input);
    CHECK(kind_of([] { parse("0 0\n"); }) == ErrorKind::malformed_input);
    CHECK(kind_of([] { parse("0 1\n1 0\n"); }) == ErrorKind::malformed_input);
    CHECK(kind_of([] { parse("0 1 -2\n"); }) == ErrorKind::malformed_input);
    CHECK(kind_of([] { parse("# nothing\n"); }) == ErrorKind::malformed_input);
}

TEST_CASE("Laplacian of a weighted triangle") {
    const WeightedGraph g = parse("0 1 1\n1 2 2\n0 2 3\n");
    const Matrix l = laplacian(g).matrix();
    CHECK(l == Matrix{{4, -1, -3}, {-1, 3, -2}, {-3, -2, 5}});
}

TEST_CASE("isolated vertices are rejected") {
    const WeightedGraph g = parse("0 2\n");
    CHECK(kind_of([&] { build_operators(g); }) == ErrorKind::isolated_vertex);
    CHECK(kind_of([&] { spectral_embed(g, 1, EmbedVariant::unnormalized); }) == ErrorKind::isolated_vertex);
}

TEST_CASE("P3 and K3 spectra") {
    const WeightedGraph p3 = parse("0 1\n1 2\n");
    check_close(spectral_embed(p3, 3, EmbedVariant::unnormalized).eigenvalues, {0.0, 1.0, 3.0}, 1e-9);
    const WeightedGraph k3 = parse("0 1\n1 2\n0 2\n");
    check_close(spectral_embed(k3, 3, EmbedVariant::generalized).eigenvalues, {0.0, 1.5, 1.5}, 1e-9);
}

TEST_CASE("embedding normalization") {
    Rng rng(3);
    const WeightedGraph g = random_connected_graph(rng, 9);
    const GraphOperators ops = build_operators(g);
    const Embedding gen = spectral_embed(g, 4, EmbedVariant::generalized);
    const Matrix& v = gen.coordinates;
    CHECK(max_abs_diff(v.transpose() * ops.degree.matrix().matrix() * v, Matrix::identity(4)) < 1e-10);
    const Embedding un = spectral_embed(g, 4, EmbedVariant::unnormalized);
    CHECK(max_abs_diff(un.coordinates.transpose() * un.coordinates, Matrix::identity(4)) < 1e-10);
    CHECK(gen.connected);
    CHECK_THROWS_AS(spectral_embed(g, 10, EmbedVariant::generalized), Error);
}

TEST_CASE("generalized spectrum agrees with the Eigen oracle") {
    Rng rng(4);
    for (int t = 0; t < 10; ++t) {
        const WeightedGraph g = random_connected_graph(rng, 3 + rng.index(15));
        const GraphOperators ops = build_operators(g);
        oracle::Eig ref = oracle::generalized_eig(ops.laplacian, ops.degree.matrix());
        std::reverse(ref.values.begin(), ref.values.end());
        const ConsistencyReport r = consistency_check(g);
        CHECK(r.pass);
        check_close(r.generalized, ref.values, 1e-9);
    }
}

TEST_CASE("zero eigenvalues count components") {
    const WeightedGraph g = parse("0 1\n2 3\n3 4\n");
    CHECK(g.component_count() == 2);
    const Embedding e = spectral_embed(g, 5, EmbedVariant::generalized);
    CHECK_FALSE(e.connected);
    std::size_t zeros = 0;
    for (double l : e.eigenvalues) zeros += std::abs(l) < 1e-9 ? 1 : 0;
    CHECK(zeros == 2);
}

TEST_CASE("beta Laplacian spectrum keeps zeros") {
    const WeightedGraph p3 = parse("0 1\n1 2\n");
    check_close(beta_laplacian_spectrum(p3, 0.5), {0.0, 1.0, std::sqrt(3.0)}, 1e-12);
    check_close(beta_laplacian_spectrum(p3, 0.0), {0.0, 1.0, 1.0}, 1e-12);
}
