// Serial reference against the OpenMP kernels. Set OMP_NUM_THREADS to vary
// the parallel backend.

#include <benchmark/benchmark.h>

#include "mapca/deep.hpp"
#include "mapca/equiv.hpp"
#include "mapca/kernels.hpp"
#include "mapca/random.hpp"

using namespace mapca;

namespace {

kernels::Backend backend_of(const benchmark::State& state) {
    return state.range(1) == 0 ? kernels::Backend::serial : kernels::Backend::parallel;
}

void backend_args(benchmark::internal::Benchmark* b) {
    for (int n : {32, 128, 256})
        for (int backend : {0, 1}) b->Args({n, backend});
    b->ArgNames({"n", "parallel"});
}

void BM_multiply(benchmark::State& state) {
    Rng rng(1);
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = gaussian_matrix(rng, n, n);
    const Matrix b = gaussian_matrix(rng, n, n);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::multiply(a, b, backend_of(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}
BENCHMARK(BM_multiply)->Apply(backend_args);

void BM_gram(benchmark::State& state) {
    Rng rng(2);
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = gaussian_matrix(rng, 4 * n, n);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::gram(a, backend_of(state)));
}
BENCHMARK(BM_gram)->Apply(backend_args);

void BM_covariance(benchmark::State& state) {
    Rng rng(3);
    const auto n = static_cast<std::size_t>(state.range(0));
    const DataMatrix x(gaussian_matrix(rng, 8 * n, n));
    for (auto _ : state) benchmark::DoNotOptimize(covariance(x, Divisor::n_minus_1, backend_of(state)));
}
BENCHMARK(BM_covariance)->Apply(backend_args);

void BM_deep_forward(benchmark::State& state) {
    Rng rng(4);
    const auto rows = static_cast<std::size_t>(state.range(0)) * 16;
    const DataMatrix x(gaussian_matrix(rng, 200, 12) * gaussian_matrix(rng, 12, 12));
    deep::DeepConfig cfg;
    cfg.dims = {12, 8, 6, 4};
    cfg.activation = deep::Activation::tanh;
    const deep::DeepStack stack = deep::fit(cfg, x);
    const Matrix batch = gaussian_matrix(rng, rows, 12);
    for (auto _ : state) benchmark::DoNotOptimize(deep::forward(stack, batch, backend_of(state)));
}
BENCHMARK(BM_deep_forward)->Apply(backend_args);

void BM_equivariance_trials(benchmark::State& state) {
    Rng rng(5);
    const SymmetricMatrix sigma = random_spd(rng, 8);
    const auto trials = static_cast<std::size_t>(state.range(0));
    std::vector<double> out(trials);
    for (auto _ : state) {
        kernels::for_each_index(
            trials,
            [&](std::size_t t) {
                Rng local(derive_seed(9, t));
                const auto c = equiv::DiagonalScaling::random(local, 8, 0.1, 10.0);
                out[t] = equiv::check_scale_equivariance(sigma, MetricRule::diag(), c).spectrum_deviation;
            },
            backend_of(state));
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_equivariance_trials)->Apply(backend_args);

} // namespace

BENCHMARK_MAIN();
