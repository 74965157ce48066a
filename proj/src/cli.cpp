#include "mapca/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mapca/deep.hpp"
#include "mapca/equiv.hpp"
#include "mapca/graphspec.hpp"
#include "mapca/io.hpp"
#include "mapca/kernels.hpp"
#include "mapca/manifest.hpp"
#include "mapca/random.hpp"
#include "mapca/solver.hpp"
#include "mapca/unique.hpp"

namespace mapca::cli {

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::malformed_input: return exit_code::malformed_input;
    case ErrorKind::not_spd: return exit_code::not_spd;
    case ErrorKind::dimension_mismatch: return exit_code::dimension_mismatch;
    case ErrorKind::rank_deficient: return exit_code::rank_deficient;
    case ErrorKind::isolated_vertex: return exit_code::isolated_vertex;
    case ErrorKind::constraint_violation: return exit_code::constraint_violation;
    case ErrorKind::no_convergence: return exit_code::unexpected_outcome;
    }
    return exit_code::unexpected_outcome;
}

namespace {

using json = nlohmann::json;

using Artifact = std::pair<std::string, std::string>;

// Everything a command produces, held back until it has succeeded.
struct Result {
    int code = exit_code::ok;
    std::vector<Artifact> files;
    std::string text;
    std::string diagnostic;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::uint64_t parse_seed_text(const std::string& text, const std::string& origin) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &used, 10);
    } catch (const std::exception&) {
        used = 0;
    }
    require(!text.empty() && used == text.size() && text.front() != '-', ErrorKind::malformed_input,
            origin + ": '" + text + "' is not a non-negative integer seed");
    return v;
}

// --seed, then MAPCA_SEED, then the command's own default, then 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag,
                           const std::optional<std::uint64_t>& fallback = std::nullopt) {
    if (flag) return *flag;
    if (const char* env = std::getenv("MAPCA_SEED")) return parse_seed_text(env, "MAPCA_SEED");
    return fallback.value_or(0);
}

struct LoadedData {
    std::string bytes;
    DataMatrix x;
};

LoadedData load_data(const std::string& path) {
    std::string bytes = io::read_file(path);
    DataMatrix x(io::read_csv_text(bytes));
    return {std::move(bytes), std::move(x)};
}

void check_beta_range(const MetricRule& rule, bool allow_any) {
    if (rule.kind() != MetricRule::Kind::beta || allow_any) return;
    const double b = rule.exponent();
    require(b >= 0.0 && b <= 1.0, ErrorKind::invalid_argument,
            "beta must lie in [0, 1]; pass --allow-any-beta to override");
}

std::string number_text(double v) { return io::format_double(v); }

// spectrum ----------------------------------------------------------------

struct SpectrumOptions {
    std::string data;
    std::string metric = "identity";
    std::size_t k = 0;
    std::string output;
    bool allow_any_beta = false;
    bool population = false;
    std::optional<std::uint64_t> seed;
};

Metric metric_from_file(const std::string& path, std::size_t p, std::string& inputs) {
    const std::string bytes = io::read_file(path);
    inputs += bytes;
    const Matrix m = io::read_csv_text(bytes);
    require(m.rows() == p && m.cols() == p, ErrorKind::dimension_mismatch,
            "metric file is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", data has p = " +
                std::to_string(p));
    std::optional<SymmetricMatrix> s;
    try {
        s.emplace(m);
    } catch (const Error& e) {
        fail(ErrorKind::not_spd, std::string("metric file: ") + e.what());
    }
    return Metric(std::move(*s));
}

Result cmd_spectrum(const SpectrumOptions& o) {
    LoadedData in = load_data(o.data);
    std::string inputs = in.bytes;
    const std::size_t p = in.x.p();
    const SymmetricMatrix sigma = covariance(in.x, o.population ? Divisor::n : Divisor::n_minus_1);

    std::optional<Metric> metric;
    if (o.metric.rfind("file=", 0) == 0) {
        metric.emplace(metric_from_file(o.metric.substr(5), p, inputs));
    } else {
        const MetricRule rule = MetricRule::parse(o.metric);
        check_beta_range(rule, o.allow_any_beta);
        metric.emplace(rule.apply(sigma));
    }
    const std::size_t k = o.k == 0 ? p : o.k;
    require(k <= p, ErrorKind::dimension_mismatch, "k = " + std::to_string(k) + " exceeds p = " + std::to_string(p));

    const MapcaSolution sol = solve(MapcaProblem(sigma, *metric, k));
    // input locations are left out so that relocated inputs give identical artifacts
    std::string metric_text = o.metric;
    if (metric_text.rfind("file=", 0) == 0)
        metric_text = "file=" + std::filesystem::path(metric_text.substr(5)).filename().string();
    RunManifest manifest{.command = "spectrum",
                         .parameters = {{"metric", metric_text},
                                        {"k", std::to_string(k)},
                                        {"divisor", o.population ? "n" : "n-1"},
                                        {"allow_any_beta", o.allow_any_beta ? "true" : "false"}},
                         .seed = resolve_seed(o.seed),
                         .input_digest = sha256_hex(inputs)};
    const json report = {
        {"command", "spectrum"},
        {"p", p},
        {"k", k},
        {"eigenvalues", sol.eigenvalues},
        {"loadings", io::to_json(sol.loadings)},
        {"whitened_loadings", io::to_json(sol.whitened_loadings)},
        {"effective_operator_spectrum", sol.effective_operator_spectrum},
        {"constraint_residual", constraint_residual(sol.loadings, *metric)},
        {"eigen_residual", eigen_residual(sigma, *metric, sol)},
        {"manifest", manifest.to_json()},
    };
    Result r;
    if (o.output.empty()) {
        r.text = dump(report);
    } else {
        r.files.push_back({o.output, dump(report)});
    }
    return r;
}

// beta-sweep --------------------------------------------------------------

struct SweepOptions {
    std::string data;
    std::size_t grid = 11;
    std::string output;
    bool population = false;
    std::optional<std::uint64_t> seed;
};

Result cmd_beta_sweep(const SweepOptions& o) {
    require(o.grid >= 2, ErrorKind::invalid_argument, "grid must have at least two points");
    LoadedData in = load_data(o.data);
    const std::size_t p = in.x.p();
    const SymmetricMatrix sigma = covariance(in.x, o.population ? Divisor::n : Divisor::n_minus_1);
    const Metric sigma_metric(sigma);
    const double lambda_ratio = sigma_metric.max_eigenvalue() / sigma_metric.min_eigenvalue();

    std::string csv = "beta,kappa";
    for (std::size_t i = 1; i <= p; ++i) csv += ",lambda_" + std::to_string(i);
    csv += '\n';
    for (std::size_t g = 0; g < o.grid; ++g) {
        const double beta = static_cast<double>(g) / static_cast<double>(o.grid - 1);
        const MapcaSolution sol = solve(MapcaProblem(sigma, beta_metric(sigma, beta), p));
        csv += number_text(beta) + "," + number_text(std::pow(lambda_ratio, 1.0 - beta));
        for (double l : sol.eigenvalues) csv += "," + number_text(l);
        csv += '\n';
    }

    Result r;
    if (o.output.empty()) {
        r.text = csv;
        return r;
    }
    RunManifest manifest{.command = "beta-sweep",
                         .parameters = {{"grid", std::to_string(o.grid)}, {"divisor", o.population ? "n" : "n-1"}},
                         .seed = resolve_seed(o.seed),
                         .input_digest = sha256_hex(in.bytes)};
    manifest.extra["artifact_digest"] = sha256_hex(csv);
    r.files.push_back({o.output, csv});
    r.files.push_back({o.output + ".manifest.json", dump(manifest.to_json())});
    return r;
}

// equicheck ---------------------------------------------------------------

struct EquicheckOptions {
    std::string data;
    std::string rule = "diag";
    std::size_t trials = 100;
    std::optional<std::uint64_t> seed;
    bool signed_scalings = false;
    bool allow_any_beta = false;
    std::string output;
};

bool rule_expected_to_pass(const MetricRule& rule) {
    switch (rule.kind()) {
    case MetricRule::Kind::diag:
    case MetricRule::Kind::covariance: return true;
    case MetricRule::Kind::beta: return rule.exponent() == 1.0;
    case MetricRule::Kind::identity: return false;
    }
    return false;
}

Result cmd_equicheck(const EquicheckOptions& o) {
    require(o.trials >= 1, ErrorKind::invalid_argument, "at least one trial is required");
    const MetricRule rule = MetricRule::parse(o.rule);
    check_beta_range(rule, o.allow_any_beta);
    LoadedData in = load_data(o.data);
    const std::size_t p = in.x.p();
    const SymmetricMatrix sigma = covariance(in.x);
    rule.apply(sigma);
    const std::uint64_t seed = resolve_seed(o.seed);

    std::vector<equiv::EquivarianceReport> reports(o.trials);
    std::vector<Vector> scalings(o.trials);
    kernels::for_each_index(o.trials, [&](std::size_t t) {
        const std::uint64_t trial_seed = derive_seed(seed, t);
        Rng rng(trial_seed);
        const auto c = equiv::DiagonalScaling::random(rng, p, 0.1, 10.0, o.signed_scalings);
        reports[t] = equiv::check_scale_equivariance(sigma, rule, c, trial_seed);
        scalings[t] = c.entries();
    });

    const bool expected_pass = rule_expected_to_pass(rule);
    bool all_pass = true;
    std::optional<std::size_t> worst;
    auto badness = [&](std::size_t t) { return std::max(reports[t].spectrum_deviation, reports[t].loading_deviation); };
    json trial_list = json::array();
    for (std::size_t t = 0; t < o.trials; ++t) {
        all_pass = all_pass && reports[t].pass;
        if (!reports[t].pass && (!worst || badness(t) > badness(*worst))) worst = t;
        json j = io::to_json(reports[t]);
        j["scaling"] = scalings[t];
        trial_list.push_back(std::move(j));
    }

    json counterexample = nullptr;
    if (worst) {
        const std::size_t t = *worst;
        counterexample = {
            {"trial", t},
            {"seed", reports[t].seed},
            {"scaling", scalings[t]},
            {"spectrum_deviation", reports[t].spectrum_deviation},
            {"loading_deviation", reports[t].loading_deviation},
        };
        if (rule.kind() == MetricRule::Kind::beta || rule.kind() == MetricRule::Kind::identity) {
            const double b = rule.kind() == MetricRule::Kind::beta ? rule.exponent() : 0.0;
            const auto [dev, literal] =
                equiv::tensorial_deviation(sigma, equiv::DiagonalScaling(scalings[t], !o.signed_scalings), b);
            counterexample["tensorial_deviation"] = dev;
            counterexample["literal_tensorial_deviation"] = literal;
        }
    }

    const bool matches = expected_pass == all_pass;
    RunManifest manifest{.command = "equicheck",
                         .parameters = {{"rule", rule.name()},
                                        {"trials", std::to_string(o.trials)},
                                        {"signed", o.signed_scalings ? "true" : "false"}},
                         .seed = seed,
                         .input_digest = sha256_hex(in.bytes)};
    const json report = {
        {"command", "equicheck"},
        {"rule", rule.name()},
        {"p", p},
        {"expected", expected_pass ? "pass" : "fail"},
        {"observed", all_pass ? "pass" : "fail"},
        {"outcome_matches", matches},
        {"trials", std::move(trial_list)},
        {"counterexample", std::move(counterexample)},
        {"manifest", manifest.to_json()},
    };

    Result r;
    if (!matches) {
        r.code = exit_code::unexpected_outcome;
        r.diagnostic = "equicheck: expected " + std::string(expected_pass ? "pass" : "fail") + " for rule " +
                       rule.name() + ", observed " + (all_pass ? "pass" : "fail");
        r.text = dump(report);
        return r;
    }
    if (o.output.empty()) {
        r.text = dump(report);
    } else {
        r.files.push_back({o.output, dump(report)});
    }
    return r;
}

// uniqueness --------------------------------------------------------------

struct UniquenessCliOptions {
    std::size_t p = 2;
    std::optional<std::uint64_t> seed;
    bool signed_scalings = false;
    std::size_t n_sigma = 0;
    std::size_t n_scaling = 0;
    std::string output;
};

Result cmd_uniqueness(const UniquenessCliOptions& o) {
    require(o.p >= 2 && o.p <= 6, ErrorKind::invalid_argument, "p must lie in [2, 6]");
    const std::uint64_t seed = resolve_seed(o.seed);
    const unique::UniquenessResult res = unique::solve_uniqueness({.p = o.p,
                                                                   .n_sigma = o.n_sigma,
                                                                   .n_scaling = o.n_scaling,
                                                                   .seed = seed,
                                                                   .signed_scalings = o.signed_scalings});
    const bool is_unique = res.solution_space_dim == 0 && res.max_deviation_from_diag < 1e-8;
    RunManifest manifest{.command = "uniqueness",
                         .parameters = {{"p", std::to_string(o.p)},
                                        {"n_sigma", std::to_string(o.n_sigma)},
                                        {"n_scaling", std::to_string(o.n_scaling)},
                                        {"signed", o.signed_scalings ? "true" : "false"}},
                         .seed = seed,
                         .input_digest = sha256_hex("")};
    const json report = {
        {"command", "uniqueness"},
        {"p", o.p},
        {"equation_count", res.equation_count},
        {"results", io::to_json(res)},
        {"unique", is_unique},
        {"manifest", manifest.to_json()},
    };
    std::ostringstream summary;
    summary << "p = " << o.p << ": (i)+(ii) solution space dim " << res.homogeneous_dim
            << ", (i)+(ii)+(iii) solution space dim " << res.solution_space_dim << ", max deviation from diag "
            << number_text(res.max_deviation_from_diag) << "\n";

    Result r;
    if (!is_unique) {
        r.code = exit_code::unexpected_outcome;
        r.diagnostic = "uniqueness: solution is not the unique diagonal extractor";
        r.text = dump(report);
        return r;
    }
    if (o.output.empty()) {
        r.text = dump(report);
    } else {
        r.files.push_back({o.output, dump(report)});
        r.text = summary.str();
    }
    return r;
}

// graph-embed -------------------------------------------------------------

struct GraphOptions {
    std::string edges;
    std::size_t k = 2;
    std::string variant = "generalized";
    std::optional<double> beta;
    bool allow_any_beta = false;
    std::string spectrum_output;
    std::string embedding_output;
    std::optional<std::uint64_t> seed;
};

Result cmd_graph_embed(const GraphOptions& o, std::string& warnings) {
    graph::EmbedVariant variant{};
    if (o.variant == "unnormalized") {
        variant = graph::EmbedVariant::unnormalized;
    } else if (o.variant == "generalized") {
        variant = graph::EmbedVariant::generalized;
    } else {
        fail(ErrorKind::invalid_argument, "variant must be 'unnormalized' or 'generalized'");
    }
    if (o.beta && !o.allow_any_beta) {
        require(*o.beta >= 0.0 && *o.beta <= 1.0, ErrorKind::invalid_argument,
                "beta must lie in [0, 1]; pass --allow-any-beta to override");
    }
    const std::string bytes = io::read_file(o.edges);
    std::istringstream edge_stream(bytes);
    const graph::WeightedGraph g = graph::WeightedGraph::parse_edge_list(edge_stream);

    const graph::ConsistencyReport consistency = graph::consistency_check(g);
    const graph::Embedding embedding = graph::spectral_embed(g, o.k, variant);
    const std::size_t components = g.component_count();
    if (components > 1) {
        warnings += "graph-embed: warning: graph has " + std::to_string(components) +
                    " connected components; the embedding is not unique\n";
    }

    const std::string csv = io::embedding_csv(embedding);
    RunManifest manifest{.command = "graph-embed",
                         .parameters = {{"k", std::to_string(o.k)}, {"variant", o.variant}},
                         .seed = resolve_seed(o.seed),
                         .input_digest = sha256_hex(bytes)};
    if (o.beta) manifest.parameters["beta"] = number_text(*o.beta);
    manifest.extra["consistency"] = {
        {"generalized", consistency.generalized},
        {"normalized", consistency.normalized},
        {"max_deviation", consistency.max_deviation},
        {"pass", consistency.pass},
    };
    manifest.extra["embedding_digest"] = sha256_hex(csv);

    json report = {
        {"command", "graph-embed"},
        {"n", g.vertex_count()},
        {"k", o.k},
        {"variant", o.variant},
        {"eigenvalues", embedding.eigenvalues},
        {"connected", embedding.connected},
        {"component_count", components},
        {"manifest", manifest.to_json()},
    };
    if (o.beta) {
        report["beta"] = *o.beta;
        report["beta_laplacian_spectrum"] = graph::beta_laplacian_spectrum(g, *o.beta);
    }

    Result r;
    if (!consistency.pass) {
        r.code = exit_code::unexpected_outcome;
        r.diagnostic = "graph-embed: generalized and normalized spectra disagree (max deviation " +
                       number_text(consistency.max_deviation) + ")";
        r.text = dump(report);
        return r;
    }
    if (!o.embedding_output.empty()) r.files.push_back({o.embedding_output, csv});
    if (o.spectrum_output.empty()) {
        r.text = dump(report);
    } else {
        r.files.push_back({o.spectrum_output, dump(report)});
    }
    return r;
}

// deep --------------------------------------------------------------------

struct DeepOptions {
    std::string config;
    std::string data;
    std::string check = "none";
    std::optional<std::uint64_t> scaling_seed;
    std::optional<std::uint64_t> seed;
    double max_residual = 1e-8;
    std::string output;
};

Result cmd_deep(const DeepOptions& o) {
    require(o.check == "none" || o.check == "invariance" || o.check == "counterexample", ErrorKind::invalid_argument,
            "check must be none, invariance or counterexample");
    const std::string config_bytes = io::read_file(o.config);
    std::istringstream config_stream(config_bytes);
    deep::DeepConfig config = deep::DeepConfig::parse(config_stream);
    const std::uint64_t seed = resolve_seed(o.seed, config.seed);
    config.seed = seed;
    LoadedData in = load_data(o.data);
    require(config.dims.front() == in.x.p(), ErrorKind::dimension_mismatch,
            "config d_0 = " + std::to_string(config.dims.front()) + " but data has p = " + std::to_string(in.x.p()));

    const deep::DeepStack stack = deep::fit(config, in.x);
    const double residual = deep::max_constraint_residual(stack);
    if (!(residual <= o.max_residual)) {
        fail(ErrorKind::constraint_violation, "layer constraint residual " + number_text(residual) + " exceeds " +
                                                  number_text(o.max_residual));
    }

    const std::uint64_t scaling_seed = o.scaling_seed.value_or(seed);
    json check = nullptr;
    bool matches = true;
    if (o.check != "none") {
        Rng rng(scaling_seed);
        const auto c = equiv::DiagonalScaling::random(rng, in.x.p(), 0.1, 10.0);
        const bool invariance = o.check == "invariance";
        const deep::DepthReport rep = invariance ? deep::depth_invariance_check(config, in.x, c)
                                                 : deep::depth_invariance_counterexample(config, in.x, c);
        matches = invariance ? rep.pass : !rep.pass;
        check = io::to_json(rep);
        check["kind"] = o.check;
        check["expected"] = invariance ? "pass" : "fail";
        check["observed"] = rep.pass ? "pass" : "fail";
        check["outcome_matches"] = matches;
        check["scaling"] = c.entries();
    }

    RunManifest manifest{.command = "deep",
                         .parameters = {{"check", o.check},
                                        {"scaling_seed", std::to_string(scaling_seed)},
                                        {"max_residual", number_text(o.max_residual)}},
                         .seed = seed,
                         .input_digest = sha256_hex(config_bytes + in.bytes)};
    const json report = {
        {"command", "deep"},
        {"config", io::to_json(config)},
        {"stack", io::to_json(stack)},
        {"constraint_residual", residual},
        {"check", std::move(check)},
        {"manifest", manifest.to_json()},
    };

    Result r;
    if (!matches) {
        r.code = exit_code::unexpected_outcome;
        r.diagnostic = "deep: " + o.check + " check did not meet its expected outcome";
        r.text = dump(report);
        return r;
    }
    if (o.output.empty()) {
        r.text = dump(report);
    } else {
        r.files.push_back({o.output, dump(report)});
    }
    return r;
}

void add_seed(CLI::App* cmd, std::optional<std::uint64_t>& seed) {
    cmd->add_option("--seed", seed, "Random seed (overrides MAPCA_SEED)");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Metric-aware PCA toolkit", "mapca"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version));

    SpectrumOptions spectrum;
    auto* sp = app.add_subcommand("spectrum", "Solve a MAPCA problem on a data CSV");
    sp->add_option("data", spectrum.data, "Data CSV (rows are samples)")->required();
    sp->add_option("--metric", spectrum.metric, "identity | diag | beta=<v> | covariance | file=<path>");
    sp->add_option("-k", spectrum.k, "Number of components (default p)");
    sp->add_option("-o,--output", spectrum.output, "Output JSON path");
    sp->add_flag("--allow-any-beta", spectrum.allow_any_beta, "Accept beta outside [0, 1]");
    sp->add_flag("--population", spectrum.population, "Divide the covariance by n instead of n - 1");
    add_seed(sp, spectrum.seed);

    SweepOptions sweep;
    auto* bs = app.add_subcommand("beta-sweep", "Beta-family spectra and conditioning over a uniform grid");
    bs->add_option("data", sweep.data, "Data CSV")->required();
    bs->add_option("--grid", sweep.grid, "Number of grid points on [0, 1]");
    bs->add_option("-o,--output", sweep.output, "Output CSV path");
    bs->add_flag("--population", sweep.population, "Divide the covariance by n instead of n - 1");
    add_seed(bs, sweep.seed);

    EquicheckOptions equicheck;
    auto* eq = app.add_subcommand("equicheck", "Seeded diagonal-rescaling equivariance battery");
    eq->add_option("data", equicheck.data, "Data CSV")->required();
    eq->add_option("--rule", equicheck.rule, "identity | diag | beta=<v> | covariance");
    eq->add_option("--trials", equicheck.trials, "Number of seeded trials");
    eq->add_flag("--signed", equicheck.signed_scalings, "Draw scalings with random signs");
    eq->add_flag("--allow-any-beta", equicheck.allow_any_beta, "Accept beta outside [0, 1]");
    eq->add_option("-o,--output", equicheck.output, "Output JSON path");
    add_seed(eq, equicheck.seed);

    UniquenessCliOptions uniq;
    auto* un = app.add_subcommand("uniqueness", "Linear-algebra oracle for the diagonal extractor");
    un->add_option("--p", uniq.p, "Dimension (2 to 6)");
    un->add_flag("--signed", uniq.signed_scalings, "Use signed diagonal scalings");
    un->add_option("--n-sigma", uniq.n_sigma, "Covariance samples (default 2d)");
    un->add_option("--n-scaling", uniq.n_scaling, "Scaling samples (default 2p)");
    un->add_option("-o,--output", uniq.output, "Output JSON path");
    add_seed(un, uniq.seed);

    GraphOptions graph_opts;
    auto* ge = app.add_subcommand("graph-embed", "Spectral embedding of a weighted edge list");
    ge->add_option("edges", graph_opts.edges, "Edge list ('u v [w]' per line)")->required();
    ge->add_option("-k", graph_opts.k, "Embedding dimension");
    ge->add_option("--variant", graph_opts.variant, "unnormalized | generalized");
    ge->add_option("--beta", graph_opts.beta, "Also report the spectrum of L^beta");
    ge->add_flag("--allow-any-beta", graph_opts.allow_any_beta, "Accept beta outside [0, 1]");
    ge->add_option("-o,--spectrum", graph_opts.spectrum_output, "Spectrum JSON path");
    ge->add_option("--embedding", graph_opts.embedding_output, "Embedding CSV path");
    add_seed(ge, graph_opts.seed);

    DeepOptions deep_opts;
    auto* dp = app.add_subcommand("deep", "Fit a deep MAPCA stack and run depth checks");
    dp->add_option("--config", deep_opts.config, "Stack configuration file")->required();
    dp->add_option("--data", deep_opts.data, "Data CSV")->required();
    dp->add_option("--check", deep_opts.check, "none | invariance | counterexample");
    dp->add_option("--scaling-seed", deep_opts.scaling_seed, "Seed of the diagonal scaling (default: seed)");
    dp->add_option("--max-residual", deep_opts.max_residual, "Largest accepted layer constraint residual");
    dp->add_option("-o,--output", deep_opts.output, "Output JSON path");
    add_seed(dp, deep_opts.seed);

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.emplace_back("mapca");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::malformed_input;
    }

    std::string warnings;
    Result result;
    try {
        if (*sp) {
            result = cmd_spectrum(spectrum);
        } else if (*bs) {
            result = cmd_beta_sweep(sweep);
        } else if (*eq) {
            result = cmd_equicheck(equicheck);
        } else if (*un) {
            result = cmd_uniqueness(uniq);
        } else if (*ge) {
            result = cmd_graph_embed(graph_opts, warnings);
        } else {
            result = cmd_deep(deep_opts);
        }
        err << warnings;
        if (result.code != exit_code::ok) {
            err << result.diagnostic << '\n' << result.text;
            return result.code;
        }
        io::write_atomic(result.files);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::unexpected_outcome;
    }
    out << result.text;
    return exit_code::ok;
}

} // namespace mapca::cli
