#include "mapca/graphspec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "mapca/error.hpp"

namespace mapca::graph {

WeightedGraph::WeightedGraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    require(n_ >= 1, ErrorKind::invalid_argument, "WeightedGraph: at least one vertex is required");
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const Edge& e : edges_) {
        require(e.u < n_ && e.v < n_, ErrorKind::malformed_input, "WeightedGraph: vertex index out of range");
        require(e.u != e.v, ErrorKind::malformed_input, "WeightedGraph: self-loop on vertex " + std::to_string(e.u));
        require(std::isfinite(e.weight) && e.weight > 0.0, ErrorKind::malformed_input,
                "WeightedGraph: edge weights must be positive");
        const auto key = std::minmax(e.u, e.v);
        require(seen.insert({key.first, key.second}).second, ErrorKind::malformed_input,
                "WeightedGraph: duplicate edge " + std::to_string(key.first) + "-" + std::to_string(key.second));
    }
}

WeightedGraph WeightedGraph::parse_edge_list(std::istream& in) {
    std::vector<Edge> edges;
    std::size_t n = 0;
    std::string line;
    std::size_t line_no = 0;
    auto bad = [&](const std::string& why) {
        fail(ErrorKind::malformed_input, "edge list line " + std::to_string(line_no) + ": " + why);
    };
    auto parse_index = [&](const std::string& tok) -> std::size_t {
        if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char ch) { return std::isdigit(ch); }))
            bad("'" + tok + "' is not a vertex index");
        try {
            return static_cast<std::size_t>(std::stoull(tok));
        } catch (const std::exception&) {
            bad("'" + tok + "' is out of range");
        }
        return 0;
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        for (std::string tok; ls >> tok;) tokens.push_back(tok);
        if (tokens.size() != 2 && tokens.size() != 3) bad("expected 'u v' or 'u v w'");
        Edge e{parse_index(tokens[0]), parse_index(tokens[1]), 1.0};
        if (tokens.size() == 3) {
            std::size_t used = 0;
            try {
                e.weight = std::stod(tokens[2], &used);
            } catch (const std::exception&) {
                bad("'" + tokens[2] + "' is not a weight");
            }
            if (used != tokens[2].size()) bad("'" + tokens[2] + "' is not a weight");
        }
        n = std::max({n, e.u + 1, e.v + 1});
        edges.push_back(e);
    }
    if (edges.empty()) fail(ErrorKind::malformed_input, "edge list is empty");
    return WeightedGraph(n, std::move(edges));
}

Vector WeightedGraph::degrees() const {
    Vector d(n_, 0.0);
    for (const Edge& e : edges_) {
        d[e.u] += e.weight;
        d[e.v] += e.weight;
    }
    return d;
}

std::size_t WeightedGraph::component_count() const {
    std::vector<std::size_t> parent(n_);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t components = n_;
    for (const Edge& e : edges_) {
        const std::size_t a = find(e.u);
        const std::size_t b = find(e.v);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components;
}

SymmetricMatrix adjacency(const WeightedGraph& g) {
    Matrix a(g.vertex_count(), g.vertex_count());
    for (const Edge& e : g.edges()) {
        a(e.u, e.v) = e.weight;
        a(e.v, e.u) = e.weight;
    }
    return SymmetricMatrix(a, 0.0);
}

SymmetricMatrix laplacian(const WeightedGraph& g) {
    const std::size_t n = g.vertex_count();
    Matrix l(n, n);
    for (const Edge& e : g.edges()) {
        l(e.u, e.v) -= e.weight;
        l(e.v, e.u) -= e.weight;
    }
    // Diagonal as the negated off-diagonal row sum so that rows sum to zero
    // up to the order of addition.
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) s -= l(i, j);
        l(i, i) = s;
    }
    return SymmetricMatrix(l, 0.0);
}

GraphOperators build_operators(const WeightedGraph& g) {
    const Vector deg = g.degrees();
    for (std::size_t i = 0; i < deg.size(); ++i)
        require(deg[i] > 0.0, ErrorKind::isolated_vertex, "build_operators: vertex " + std::to_string(i) + " is isolated");
    SymmetricMatrix l = laplacian(g);
    Vector inv_sqrt(deg.size());
    for (std::size_t i = 0; i < deg.size(); ++i) inv_sqrt[i] = 1.0 / std::sqrt(deg[i]);
    SymmetricMatrix normalized = SymmetricMatrix::symmetrize(scale_cols(scale_rows(l.matrix(), inv_sqrt), inv_sqrt));
    return GraphOperators{adjacency(g), Metric::diagonal(deg), std::move(l), std::move(normalized)};
}

Embedding spectral_embed(const WeightedGraph& g, std::size_t k, EmbedVariant variant) {
    const std::size_t n = g.vertex_count();
    require(k >= 1 && k <= n, ErrorKind::dimension_mismatch, "spectral_embed: k must lie in [1, n]");
    GraphOperators ops = build_operators(g);
    Metric metric = variant == EmbedVariant::generalized ? ops.degree : Metric::identity(n);
    const MapcaSolution sol = solve(MapcaProblem(ops.laplacian, std::move(metric), k), SpectrumEnd::smallest);
    return Embedding{sol.eigenvalues, sol.loadings, g.component_count() == 1};
}

Vector beta_laplacian_spectrum(const WeightedGraph& g, double beta) {
    const SymmetricMatrix l = laplacian(g);
    const EigenDecomposition eig = eigh(l);
    const double cutoff = zero_eigenvalue_tolerance * std::max(1.0, eig.eigenvalues.front());
    const SymmetricMatrix powered = spectral_function(eig, [&](double mu) {
        return mu <= cutoff ? 0.0 : std::pow(mu, beta);
    });
    Vector out = eigh(powered).eigenvalues;
    std::reverse(out.begin(), out.end());
    return out;
}

ConsistencyReport consistency_check(const WeightedGraph& g, double tolerance) {
    const std::size_t n = g.vertex_count();
    const GraphOperators ops = build_operators(g);
    ConsistencyReport r;
    r.generalized = solve(MapcaProblem(ops.laplacian, ops.degree, n), SpectrumEnd::smallest).eigenvalues;
    r.normalized = eigh(ops.sym_normalized).eigenvalues;
    std::reverse(r.normalized.begin(), r.normalized.end());
    r.max_deviation = max_abs_diff(r.generalized, r.normalized);
    r.pass = r.max_deviation <= tolerance;
    return r;
}

WeightedGraph random_connected_graph(Rng& rng, std::size_t n, double extra_edge_probability) {
    require(n >= 2, ErrorKind::invalid_argument, "random_connected_graph: n must be at least 2");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng.engine());
    std::set<std::pair<std::size_t, std::size_t>> used;
    std::vector<Edge> edges;
    auto add = [&](std::size_t a, std::size_t b) {
        const auto key = std::minmax(a, b);
        if (used.insert({key.first, key.second}).second) edges.push_back({key.first, key.second, rng.uniform(0.5, 2.0)});
    };
    for (std::size_t i = 1; i < n; ++i) add(order[i], order[rng.index(i)]);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (rng.uniform(0.0, 1.0) < extra_edge_probability) add(a, b);
    return WeightedGraph(n, std::move(edges));
}

} // namespace mapca::graph
