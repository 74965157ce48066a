#pragma once

// Deep MAPCA: stacked partial isometries W_l with W_l^T M^(l-1) W_l = M^(l),
// terminating in W_L^T M^(L-1) W_L = I, and the metric-aware activation
// M^{1/2} act(M^{-1/2} y).
//
// Layers are fitted greedily. Layer l solves the MAPCA problem of its input
// covariance under M^(l-1) for the top d_l components, giving loadings
// W_mapca and codes z = W_mapca^T x with covariance Lambda_l (the layer
// spectrum). The output metric is then
//   constant policy:      M^(l) = M^(0)
//   data-derived policy:  M^(l) = rule(Lambda_l)
// and W_l = W_mapca (M^(l))^{1/2}, so the pre-activation output is
// (M^(l))^{1/2} z. M^(0) = rule(Sigma^(0)) in both policies.

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "mapca/equiv.hpp"
#include "mapca/kernels.hpp"
#include "mapca/solver.hpp"

namespace mapca::deep {

enum class Activation { identity, relu, tanh };
enum class MetricPolicy { constant, data_derived };

Activation parse_activation(const std::string& text);
std::string to_string(Activation a);
std::string to_string(MetricPolicy p);

struct DeepConfig {
    /// d_0, ..., d_L
    std::vector<std::size_t> dims;
    MetricPolicy policy = MetricPolicy::data_derived;
    MetricRule rule = MetricRule::diag();
    Activation activation = Activation::identity;
    std::uint64_t seed = 0;

    std::size_t depth() const noexcept { return dims.empty() ? 0 : dims.size() - 1; }

    /// Throws ErrorKind::invalid_argument on an empty or increasing dimension
    /// list, and ErrorKind::dimension_mismatch for a constant non-identity
    /// prior whose intermediate dimensions differ from d_0.
    void validate() const;

    /// Flat "key = value" file with keys dims (comma separated), policy
    /// (constant | data_derived), rule (identity | diag | beta |
    /// identity_rule | covariance), beta, activation (identity | relu | tanh)
    /// and seed. '#' starts a comment.
    static DeepConfig parse(std::istream& in);
};

struct Layer {
    /// d_{l-1} x d_l
    Matrix weights;
    Metric input_metric;
    Metric output_metric;
    /// Generalized eigenvalues of the layer's MAPCA fit, descending.
    Vector spectrum;
};

struct DeepStack {
    std::vector<Layer> layers;
    Activation activation = Activation::identity;

    std::size_t input_dim() const { return layers.front().weights.rows(); }
    std::size_t output_dim() const { return layers.back().weights.cols(); }
};

double activate(Activation a, double x) noexcept;

/// M^{1/2} act(M^{-1/2} y)
Vector metric_aware_activation(std::span<const double> y, const Metric& m, Activation a);

/// W = M_in^{-1/2} U M_out^{1/2}; U must have orthonormal columns within 1e-10.
Matrix isometry_from_orthonormal(const Matrix& u, const Metric& m_in, const Metric& m_out);

DeepStack fit(const DeepConfig& config, const DataMatrix& x);

/// Rows of `batch` are samples; rows are independent and processed in
/// parallel under the parallel backend.
Matrix forward(const DeepStack& stack, const Matrix& batch, kernels::Backend backend = kernels::default_backend());
Vector forward(const DeepStack& stack, std::span<const double> x);

/// Largest violation of the layer constraints.
double max_constraint_residual(const DeepStack& stack);

/// W_1 W_2 ... W_L
Matrix end_to_end_map(const DeepStack& stack);

struct DepthReport {
    /// Per-layer relative spectrum deviation after a global scale factor.
    std::vector<double> layer_spectrum_deviation;
    std::vector<double> strict_layer_spectrum_deviation;
    /// Final-representation deviation after a global scale factor, relative
    /// to max(1, max |representation|).
    double representation_deviation = 0.0;
    double strict_representation_deviation = 0.0;
    double max_spectrum_deviation = 0.0;
    double strict_max_spectrum_deviation = 0.0;
    /// Nonlinear activations and near-degenerate layer spectra restrict the
    /// verdict to spectra.
    bool spectrum_only = false;
    bool pass = false;
    bool strict_pass = false;
};

/// Fits stacks on X and on X C and compares layer spectra and final
/// representations. Requires the data-derived diag policy.
DepthReport depth_invariance_check(const DeepConfig& config, const DataMatrix& x, const equiv::DiagonalScaling& c,
                                   double tolerance = 1e-7);

/// The same comparison for a data-derived beta policy, where it is expected
/// to fail for a generic non-uniform C.
DepthReport depth_invariance_counterexample(const DeepConfig& config, const DataMatrix& x,
                                            const equiv::DiagonalScaling& c, double tolerance = 1e-7);

} // namespace mapca::deep
