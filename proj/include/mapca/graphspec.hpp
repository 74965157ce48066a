#pragma once

// Graph Laplacians as MAPCA problems: L takes the covariance role and the
// degree matrix D the metric role in L v = lambda D v.

#include <cstdint>
#include <istream>
#include <vector>

#include "mapca/random.hpp"
#include "mapca/solver.hpp"

namespace mapca::graph {

struct Edge {
    std::size_t u;
    std::size_t v;
    double weight;
};

/// Undirected weighted graph without self-loops or repeated pairs.
class WeightedGraph {
public:
    WeightedGraph(std::size_t n, std::vector<Edge> edges);

    /// Whitespace-separated "u v [w]" lines with 0-based vertices; w defaults
    /// to 1. Blank lines and lines starting with '#' are skipped. The vertex
    /// count is one past the largest index. Throws ErrorKind::malformed_input.
    static WeightedGraph parse_edge_list(std::istream& in);

    std::size_t vertex_count() const noexcept { return n_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    Vector degrees() const;
    std::size_t component_count() const;

private:
    std::size_t n_;
    std::vector<Edge> edges_;
};

SymmetricMatrix adjacency(const WeightedGraph& g);
/// L = D - A; defined for graphs with isolated vertices too.
SymmetricMatrix laplacian(const WeightedGraph& g);

struct GraphOperators {
    SymmetricMatrix adjacency;
    Metric degree;
    SymmetricMatrix laplacian;
    /// D^{-1/2} L D^{-1/2}
    SymmetricMatrix sym_normalized;
};

/// Throws ErrorKind::isolated_vertex when some vertex has degree 0.
GraphOperators build_operators(const WeightedGraph& g);

enum class EmbedVariant { unnormalized, generalized };

struct Embedding {
    /// Smallest k eigenvalues, ascending.
    Vector eigenvalues;
    /// n x k, column j pairs with eigenvalues[j]. Generalized embeddings
    /// satisfy V^T D V = I_k; unnormalized ones V^T V = I_k.
    Matrix coordinates;
    bool connected = true;
};

/// unnormalized: L v = lambda v; generalized: L v = lambda D v through the
/// MAPCA solver with the smallest end of the spectrum.
Embedding spectral_embed(const WeightedGraph& g, std::size_t k, EmbedVariant variant);

/// Spectrum of L^beta, ascending. L^beta is built spectrally with zero
/// eigenvalues kept at zero for every beta, including beta = 0.
Vector beta_laplacian_spectrum(const WeightedGraph& g, double beta);

struct ConsistencyReport {
    /// eig(L, D), ascending
    Vector generalized;
    /// eig(D^{-1/2} L D^{-1/2}), ascending
    Vector normalized;
    double max_deviation = 0.0;
    bool pass = false;
};

ConsistencyReport consistency_check(const WeightedGraph& g, double tolerance = 1e-9);

/// Random spanning tree plus each remaining pair with probability
/// extra_edge_probability; weights uniform in [0.5, 2].
WeightedGraph random_connected_graph(Rng& rng, std::size_t n, double extra_edge_probability = 0.2);

/// Relative cutoff below which a Laplacian eigenvalue counts as zero.
inline constexpr double zero_eigenvalue_tolerance = 1e-10;

} // namespace mapca::graph
