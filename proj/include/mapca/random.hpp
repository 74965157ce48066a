#pragma once

#include <cstdint>
#include <random>

#include "mapca/matcore.hpp"

namespace mapca {

/// Seeded generator shared by every sampler in the library. Output is
/// deterministic for a given seed and standard library build.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double log_uniform(double lo, double hi);
    bool coin() { return std::bernoulli_distribution(0.5)(engine_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

Matrix gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols);

/// G G^T / p + ridge * I for a Gaussian p x p matrix G.
SymmetricMatrix random_spd(Rng& rng, std::size_t p, double ridge = 0.1);

/// Orthonormal factor of the QR factorization of a Gaussian matrix.
Matrix random_orthogonal(Rng& rng, std::size_t p);

/// Q1 diag(s) Q2 with Q1, Q2 random orthogonal and s log-uniform in
/// [s_min, s_max].
Matrix random_invertible(Rng& rng, std::size_t p, double s_min = 0.3, double s_max = 3.0);

/// Derives an independent stream seed from a base seed and a trial index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

} // namespace mapca
