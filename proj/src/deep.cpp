#include "mapca/deep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "mapca/error.hpp"

namespace mapca::deep {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& key) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &used);
    } catch (const std::exception&) {
        fail(ErrorKind::malformed_input, "config: '" + key + "' expects a non-negative integer");
    }
    require(used == text.size() && text.find('-') == std::string::npos, ErrorKind::malformed_input,
            "config: '" + key + "' expects a non-negative integer");
    return v;
}

double parse_double(const std::string& text, const std::string& key) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        fail(ErrorKind::malformed_input, "config: '" + key + "' expects a number");
    }
    require(used == text.size() && std::isfinite(v), ErrorKind::malformed_input,
            "config: '" + key + "' expects a number");
    return v;
}

bool is_identity(const Metric& m) { return m.matrix().matrix() == Matrix::identity(m.dim()); }

void activate_row(std::span<double> row, const Metric& m, Activation a) {
    if (a == Activation::identity) return;
    if (is_identity(m)) {
        for (double& v : row) v = activate(a, v);
        return;
    }
    Vector z = m.inv_sqrt().matrix() * row;
    for (double& v : z) v = activate(a, v);
    const Vector out = m.sqrt().matrix() * z;
    std::copy(out.begin(), out.end(), row.begin());
}

Matrix forward_layer(const Matrix& input, const Layer& layer, Activation a, kernels::Backend backend) {
    Matrix y = kernels::multiply(input, layer.weights, backend);
    if (a != Activation::identity) {
        kernels::for_each_index(
            y.rows(), [&](std::size_t i) { activate_row(y.row(i), layer.output_metric, a); }, backend);
    }
    return y;
}

std::pair<double, double> spectrum_deviations(const Vector& moved, const Vector& base) {
    const double strict = equiv::relative_spectrum_deviation(moved, base);
    const double total = std::accumulate(base.begin(), base.end(), 0.0);
    const double total_m = std::accumulate(moved.begin(), moved.end(), 0.0);
    const double s = total > 0.0 ? total_m / total : 1.0;
    Vector scaled = base;
    for (double& l : scaled) l *= s;
    return {equiv::relative_spectrum_deviation(moved, scaled), strict};
}

DepthReport compare_stacks(const DeepConfig& config, const DataMatrix& x, const equiv::DiagonalScaling& c,
                           double tolerance) {
    require(c.dim() == x.p(), ErrorKind::dimension_mismatch, "depth check: scaling dimension mismatch");
    const DataMatrix xc(scale_cols(x.values(), c.entries()));
    const DeepStack a = fit(config, x);
    const DeepStack b = fit(config, xc);

    DepthReport r;
    r.spectrum_only = config.activation != Activation::identity;
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
        const auto [dev, strict] = spectrum_deviations(b.layers[l].spectrum, a.layers[l].spectrum);
        r.layer_spectrum_deviation.push_back(dev);
        r.strict_layer_spectrum_deviation.push_back(strict);
        r.max_spectrum_deviation = std::max(r.max_spectrum_deviation, dev);
        r.strict_max_spectrum_deviation = std::max(r.strict_max_spectrum_deviation, strict);
        const auto& spec = a.layers[l].spectrum;
        if (equiv::eigenvalue_groups(spec).size() != spec.size()) r.spectrum_only = true;
    }

    const Matrix ra = forward(a, x.values());
    const Matrix rb = forward(b, xc.values());
    r.strict_representation_deviation = max_abs_diff(rb, ra) / std::max(1.0, max_abs(ra));
    const double na = frobenius_norm(ra);
    const double s = na > 0.0 ? frobenius_norm(rb) / na : 1.0;
    const Matrix scaled = s * ra;
    r.representation_deviation = max_abs_diff(rb, scaled) / std::max(1.0, max_abs(scaled));

    r.pass = r.max_spectrum_deviation <= tolerance && (r.spectrum_only || r.representation_deviation <= tolerance);
    r.strict_pass =
        r.strict_max_spectrum_deviation <= tolerance && (r.spectrum_only || r.strict_representation_deviation <= tolerance);
    return r;
}

} // namespace

Activation parse_activation(const std::string& text) {
    if (text == "identity") return Activation::identity;
    if (text == "relu") return Activation::relu;
    if (text == "tanh") return Activation::tanh;
    fail(ErrorKind::malformed_input, "unknown activation '" + text + "'");
}

std::string to_string(Activation a) {
    switch (a) {
    case Activation::identity:
        return "identity";
    case Activation::relu:
        return "relu";
    case Activation::tanh:
        return "tanh";
    }
    return "unknown";
}

std::string to_string(MetricPolicy p) { return p == MetricPolicy::constant ? "constant" : "data_derived"; }

void DeepConfig::validate() const {
    require(dims.size() >= 2, ErrorKind::invalid_argument, "DeepConfig: at least one layer (two dims) is required");
    for (std::size_t l = 0; l < dims.size(); ++l) {
        require(dims[l] >= 1, ErrorKind::invalid_argument, "DeepConfig: dimensions must be positive");
        if (l > 0)
            require(dims[l] <= dims[l - 1], ErrorKind::invalid_argument, "DeepConfig: dimensions must be non-increasing");
    }
    if (policy == MetricPolicy::constant && rule.kind() != MetricRule::Kind::identity) {
        for (std::size_t l = 1; l + 1 < dims.size(); ++l)
            require(dims[l] == dims[0], ErrorKind::dimension_mismatch,
                    "DeepConfig: a constant non-identity prior needs every intermediate dimension equal to d_0");
    }
}

DeepConfig DeepConfig::parse(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        require(eq != std::string::npos, ErrorKind::malformed_input, "config: expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        require(!key.empty() && !value.empty(), ErrorKind::malformed_input, "config: empty key or value");
        require(kv.emplace(key, value).second, ErrorKind::malformed_input, "config: duplicate key '" + key + "'");
    }

    DeepConfig cfg;
    for (const auto& [key, value] : kv) {
        if (key == "dims") {
            std::istringstream ds(value);
            for (std::string tok; std::getline(ds, tok, ',');) cfg.dims.push_back(parse_unsigned(trim(tok), key));
        } else if (key == "policy") {
            if (value == "constant")
                cfg.policy = MetricPolicy::constant;
            else if (value == "data_derived")
                cfg.policy = MetricPolicy::data_derived;
            else
                fail(ErrorKind::malformed_input, "config: unknown policy '" + value + "'");
        } else if (key == "activation") {
            cfg.activation = parse_activation(value);
        } else if (key == "seed") {
            cfg.seed = parse_unsigned(value, key);
        } else if (key != "rule" && key != "beta") {
            fail(ErrorKind::malformed_input, "config: unknown key '" + key + "'");
        }
    }
    require(!cfg.dims.empty(), ErrorKind::malformed_input, "config: 'dims' is required");

    const auto rule = kv.find("rule");
    const auto beta = kv.find("beta");
    if (rule == kv.end() || rule->second == "beta") {
        if (rule == kv.end() && beta == kv.end()) {
            cfg.rule = MetricRule::diag();
        } else {
            require(beta != kv.end(), ErrorKind::malformed_input, "config: rule 'beta' needs a 'beta' value");
            cfg.rule = MetricRule::beta(parse_double(beta->second, "beta"));
        }
    } else {
        cfg.rule = MetricRule::parse(rule->second);
    }
    cfg.validate();
    return cfg;
}

double activate(Activation a, double x) noexcept {
    switch (a) {
    case Activation::identity:
        return x;
    case Activation::relu:
        return x > 0.0 ? x : 0.0;
    case Activation::tanh:
        return std::tanh(x);
    }
    return x;
}

Vector metric_aware_activation(std::span<const double> y, const Metric& m, Activation a) {
    require(y.size() == m.dim(), ErrorKind::dimension_mismatch, "metric_aware_activation: dimension mismatch");
    Vector out(y.begin(), y.end());
    activate_row(out, m, a);
    return out;
}

Matrix isometry_from_orthonormal(const Matrix& u, const Metric& m_in, const Metric& m_out) {
    require(u.rows() == m_in.dim() && u.cols() == m_out.dim(), ErrorKind::dimension_mismatch,
            "isometry_from_orthonormal: dimension mismatch");
    require(max_abs_diff(u.transpose() * u, Matrix::identity(u.cols())) <= 1e-10, ErrorKind::invalid_argument,
            "isometry_from_orthonormal: U does not have orthonormal columns");
    return m_in.inv_sqrt().matrix() * u * m_out.sqrt().matrix();
}

DeepStack fit(const DeepConfig& config, const DataMatrix& x) {
    config.validate();
    require(x.p() == config.dims.front(), ErrorKind::dimension_mismatch, "fit: data has the wrong number of columns");
    const std::size_t depth = config.depth();

    DeepStack stack;
    stack.activation = config.activation;
    Matrix reps = x.values();
    std::optional<Metric> prior;
    std::optional<Metric> carried;
    for (std::size_t l = 1; l <= depth; ++l) {
        const SymmetricMatrix sigma = covariance(DataMatrix(reps));
        Metric m_in = l == 1 ? config.rule.apply(sigma) : *carried;
        if (l == 1) prior = m_in;

        const std::size_t width = config.dims[l];
        const MapcaSolution sol = solve(MapcaProblem(sigma, m_in, width));
        Metric m_out = [&] {
            if (l == depth) return Metric::identity(width);
            if (config.policy == MetricPolicy::constant)
                return config.rule.kind() == MetricRule::Kind::identity ? Metric::identity(width) : *prior;
            return config.rule.apply(SymmetricMatrix::diagonal(sol.eigenvalues));
        }();

        Matrix w = isometry_from_orthonormal(sol.whitened_loadings, m_in, m_out);
        Layer layer{std::move(w), std::move(m_in), m_out, sol.eigenvalues};
        reps = forward_layer(reps, layer, config.activation, kernels::default_backend());
        stack.layers.push_back(std::move(layer));
        carried = std::move(m_out);
    }
    return stack;
}

Matrix forward(const DeepStack& stack, const Matrix& batch, kernels::Backend backend) {
    require(batch.cols() == stack.input_dim(), ErrorKind::dimension_mismatch, "forward: input dimension mismatch");
    Matrix reps = batch;
    for (const Layer& layer : stack.layers) reps = forward_layer(reps, layer, stack.activation, backend);
    return reps;
}

Vector forward(const DeepStack& stack, std::span<const double> x) {
    require(x.size() == stack.input_dim(), ErrorKind::dimension_mismatch, "forward: input dimension mismatch");
    Vector rep(x.begin(), x.end());
    for (const Layer& layer : stack.layers) {
        const Vector y = layer.weights.transpose() * rep;
        rep = metric_aware_activation(y, layer.output_metric, stack.activation);
    }
    return rep;
}

double max_constraint_residual(const DeepStack& stack) {
    double worst = 0.0;
    for (std::size_t l = 0; l < stack.layers.size(); ++l) {
        const Layer& layer = stack.layers[l];
        const Matrix& target = l + 1 == stack.layers.size() ? Matrix::identity(layer.weights.cols())
                                                            : layer.output_metric.matrix().matrix();
        worst = std::max(worst, constraint_residual(layer.weights, layer.input_metric, target));
    }
    return worst;
}

Matrix end_to_end_map(const DeepStack& stack) {
    Matrix v = stack.layers.front().weights;
    for (std::size_t l = 1; l < stack.layers.size(); ++l) v = v * stack.layers[l].weights;
    return v;
}

DepthReport depth_invariance_check(const DeepConfig& config, const DataMatrix& x, const equiv::DiagonalScaling& c,
                                   double tolerance) {
    require(config.policy == MetricPolicy::data_derived && config.rule.kind() == MetricRule::Kind::diag,
            ErrorKind::invalid_argument, "depth_invariance_check: requires the data-derived diag policy");
    return compare_stacks(config, x, c, tolerance);
}

DepthReport depth_invariance_counterexample(const DeepConfig& config, const DataMatrix& x,
                                            const equiv::DiagonalScaling& c, double tolerance) {
    require(config.policy == MetricPolicy::data_derived && config.rule.kind() == MetricRule::Kind::beta,
            ErrorKind::invalid_argument, "depth_invariance_counterexample: requires a data-derived beta policy");
    return compare_stacks(config, x, c, tolerance);
}

} // namespace mapca::deep
