#include "mapca/random.hpp"

#include <cmath>

namespace mapca {

double Rng::log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

Matrix gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    Matrix g(rows, cols);
    for (double& x : g.data()) x = rng.normal();
    return g;
}

SymmetricMatrix random_spd(Rng& rng, std::size_t p, double ridge) {
    const Matrix g = gaussian_matrix(rng, p, p);
    Matrix s = (1.0 / static_cast<double>(p)) * (g * g.transpose());
    for (std::size_t i = 0; i < p; ++i) s(i, i) += ridge;
    return SymmetricMatrix::symmetrize(s);
}

Matrix random_orthogonal(Rng& rng, std::size_t p) { return orthonormal_factor(gaussian_matrix(rng, p, p)); }

Matrix random_invertible(Rng& rng, std::size_t p, double s_min, double s_max) {
    const Matrix q1 = random_orthogonal(rng, p);
    const Matrix q2 = random_orthogonal(rng, p);
    Vector s(p);
    for (double& x : s) x = rng.log_uniform(s_min, s_max);
    return scale_cols(q1, s) * q2;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    // splitmix64 finalizer over the combined value
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace mapca
