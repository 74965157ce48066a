#include <doctest.h>

#include <sstream>

#include "mapca/deep.hpp"
#include "mapca/error.hpp"
#include "mapca/random.hpp"

using namespace mapca;
using namespace mapca::deep;

namespace {

DataMatrix make_data(std::uint64_t seed, std::size_t n, std::size_t p) {
    Rng rng(seed);
    return DataMatrix(gaussian_matrix(rng, n, p) * gaussian_matrix(rng, p, p));
}

DeepConfig config_from(const std::string& text) {
    std::istringstream in(text);
    return DeepConfig::parse(in);
}

} // namespace

TEST_CASE("config parsing") {
    const DeepConfig c = config_from("# stack\ndims = 5, 3, 2\npolicy = data_derived\nrule = beta\nbeta = 0.5\n"
                                     "activation = tanh\nseed = 9\n");
    CHECK(c.dims == std::vector<std::size_t>{5, 3, 2});
    CHECK(c.policy == MetricPolicy::data_derived);
    CHECK(c.rule.kind() == MetricRule::Kind::beta);
    CHECK(c.rule.exponent() == 0.5);
    CHECK(c.activation == Activation::tanh);
    CHECK(c.seed == 9);
    CHECK(c.depth() == 2);

    CHECK(config_from("dims = 3,2\n").rule.kind() == MetricRule::Kind::diag);
    CHECK_THROWS_AS(config_from("dims = 3,4\n"), Error);
    CHECK_THROWS_AS(config_from("dims = 3\n"), Error);
    CHECK_THROWS_AS(config_from("dims = 3,2\nrule = beta\n"), Error);
    CHECK_THROWS_AS(config_from("dims = 3,2\nfoo = 1\n"), Error);
    CHECK_THROWS_AS(config_from("dims = 3,x\n"), Error);
    try {
        config_from("dims = 3,2,1\npolicy = constant\nrule = diag\n");
        FAIL("expected a dimension mismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::dimension_mismatch);
    }
}

TEST_CASE("fitted stacks satisfy the layer constraints") {
    const DataMatrix x = make_data(1, 60, 6);
    for (const char* text : {"dims = 6,4,3,2\nrule = diag\n", "dims = 6,5,2\nrule = beta\nbeta = 0.5\nactivation = relu\n",
                             "dims = 6,6,6,3\npolicy = constant\nrule = diag\nactivation = tanh\n",
                             "dims = 6,3,1\npolicy = constant\nrule = identity\n"}) {
        const DeepStack s = fit(config_from(text), x);
        CHECK(max_constraint_residual(s) < 1e-8);
        for (const Layer& l : s.layers) {
            const Matrix lhs = l.weights.transpose() * l.input_metric.matrix().matrix() * l.weights;
            CHECK(max_abs_diff(lhs, l.output_metric.matrix().matrix()) < 1e-8);
        }
        CHECK(s.layers.back().output_metric.matrix() == SymmetricMatrix::identity(s.output_dim()));
    }
}

TEST_CASE("identity-activation composition is an isometry of M0") {
    const DataMatrix x = make_data(2, 50, 5);
    const DeepStack s = fit(config_from("dims = 5,4,3,2\nrule = diag\n"), x);
    const Matrix v = end_to_end_map(s);
    const Matrix& m0 = s.layers.front().input_metric.matrix().matrix();
    CHECK(max_abs_diff(v.transpose() * m0 * v, Matrix::identity(2)) < 1e-8);

    // forward on the batch equals x V
    const Matrix y = forward(s, x.values(), kernels::Backend::serial);
    CHECK(max_abs_diff(y, x.values() * v) < 1e-10 * std::max(1.0, max_abs(y)));
    CHECK(forward(s, x.values(), kernels::Backend::parallel) == y);
    const Vector y0 = forward(s, x.values().row(0));
    for (std::size_t j = 0; j < y0.size(); ++j) CHECK(y0[j] == y(0, j));
}

TEST_CASE("metric-aware activation") {
    const Metric m = Metric::diagonal(Vector{4.0, 1.0});
    const Vector y{-2.0, 3.0};
    CHECK(metric_aware_activation(y, m, Activation::identity) == y);
    const Vector r = metric_aware_activation(y, m, Activation::relu);
    CHECK(r[0] == 0.0);
    CHECK(r[1] == doctest::Approx(3.0));
    CHECK(activate(Activation::tanh, 0.5) == std::tanh(0.5));
}

TEST_CASE("isometry from orthonormal columns") {
    Rng rng(3);
    const Metric a(random_spd(rng, 4));
    const Metric b(random_spd(rng, 2));
    const Matrix u = random_orthogonal(rng, 4).columns(0, 2);
    const Matrix w = isometry_from_orthonormal(u, a, b);
    CHECK(max_abs_diff(w.transpose() * a.matrix().matrix() * w, b.matrix().matrix()) < 1e-10);
    CHECK_THROWS_AS(isometry_from_orthonormal(Matrix(4, 2, 1.0), a, b), Error);
}

TEST_CASE("depth checks") {
    const DataMatrix x = make_data(4, 80, 5);
    Rng rng(5);
    const auto c = equiv::DiagonalScaling::random(rng, 5, 0.1, 10.0);
    const DepthReport inv = depth_invariance_check(config_from("dims = 5,4,3,2\nrule = diag\n"), x, c);
    CHECK(inv.pass);
    CHECK(inv.representation_deviation <= 1e-7);

    const DepthReport cx =
        depth_invariance_counterexample(config_from("dims = 5,4,3,2\nrule = beta\nbeta = 0.5\n"), x, c);
    CHECK_FALSE(cx.pass);
    CHECK(std::max(cx.max_spectrum_deviation, cx.representation_deviation) > 1e-6);

    CHECK_THROWS_AS(depth_invariance_check(config_from("dims = 5,4\nrule = identity\n"), x, c), Error);
    CHECK_THROWS_AS(depth_invariance_counterexample(config_from("dims = 5,4\nrule = diag\n"), x, c), Error);

    const DepthReport same =
        depth_invariance_check(config_from("dims = 5,4,3,2\nrule = diag\n"), x, equiv::DiagonalScaling::uniform(5, 1.0));
    CHECK(same.strict_representation_deviation == 0.0);
}

TEST_CASE("fit validates data dimensions") {
    CHECK_THROWS_AS(fit(config_from("dims = 4,2\n"), make_data(6, 30, 5)), Error);
}
