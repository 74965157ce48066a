#include "mapca/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mapca/error.hpp"

namespace mapca::io {

namespace {

std::string trim(std::string_view s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return std::string(s.substr(a, b - a + 1));
}

bool parse_field(const std::string& tok, double& out) {
    if (tok.empty()) return false;
    std::size_t used = 0;
    try {
        out = std::stod(tok, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == tok.size() && std::isfinite(out);
}

} // namespace

Matrix read_csv(std::istream& in) {
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    bool first = true;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        for (std::string tok; std::getline(ls, tok, ',');) fields.push_back(trim(tok));
        if (!line.empty() && line.back() == ',') fields.emplace_back();

        std::vector<double> row(fields.size());
        bool numeric = true;
        for (std::size_t j = 0; j < fields.size(); ++j) numeric = parse_field(fields[j], row[j]) && numeric;
        if (!numeric) {
            require(first, ErrorKind::malformed_input,
                    "CSV line " + std::to_string(line_no) + ": non-numeric field");
            first = false;
            cols = fields.size();
            continue;
        }
        if (rows == 0 && (first || cols == 0)) cols = fields.size();
        first = false;
        require(fields.size() == cols, ErrorKind::malformed_input,
                "CSV line " + std::to_string(line_no) + ": expected " + std::to_string(cols) + " fields");
        values.insert(values.end(), row.begin(), row.end());
        ++rows;
    }
    require(rows > 0 && cols > 0, ErrorKind::malformed_input, "CSV contains no numeric rows");
    return Matrix(rows, cols, std::move(values));
}

Matrix read_csv_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return read_csv(in);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::malformed_input, "cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

namespace {

void write_temporary(const std::string& tmp, std::string_view contents) {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::invalid_argument, "cannot write '" + tmp + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    require(static_cast<bool>(out), ErrorKind::invalid_argument, "write to '" + tmp + "' failed");
}

} // namespace

void write_atomic(const std::string& path, std::string_view contents) {
    write_atomic({{path, std::string(contents)}});
}

void write_atomic(const std::vector<std::pair<std::string, std::string>>& files) {
    std::vector<std::string> staged;
    auto discard = [&] {
        std::error_code ignored;
        for (const auto& t : staged) std::filesystem::remove(t, ignored);
    };
    try {
        for (const auto& [path, contents] : files) {
            staged.push_back(path + ".tmp");
            write_temporary(staged.back(), contents);
        }
    } catch (...) {
        discard();
        throw;
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::error_code ec;
        std::filesystem::rename(staged[i], files[i].first, ec);
        if (ec) {
            staged.erase(staged.begin(), staged.begin() + static_cast<std::ptrdiff_t>(i));
            discard();
            fail(ErrorKind::invalid_argument, "cannot move output into place at '" + files[i].first + "': " + ec.message());
        }
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string embedding_csv(const graph::Embedding& embedding) {
    const Matrix& v = embedding.coordinates;
    std::string out = "vertex";
    for (std::size_t j = 0; j < v.cols(); ++j) out += ",coord_" + std::to_string(j + 1);
    out += '\n';
    for (std::size_t i = 0; i < v.rows(); ++i) {
        out += std::to_string(i);
        for (std::size_t j = 0; j < v.cols(); ++j) out += "," + format_double(v(i, j));
        out += '\n';
    }
    return out;
}

json to_json(const Matrix& m) {
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(m.data().begin(), m.data().end())}};
}

Matrix matrix_from_json(const json& j) {
    try {
        return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                      j.at("data").get<std::vector<double>>());
    } catch (const json::exception& e) {
        fail(ErrorKind::malformed_input, std::string("matrix JSON: ") + e.what());
    }
}

json to_json(const equiv::EquivarianceReport& r) {
    return {
        {"rule", r.rule},
        {"p", r.p},
        {"seed", r.seed},
        {"spectrum_deviation", r.spectrum_deviation},
        {"loading_deviation", r.loading_deviation},
        {"strict_spectrum_deviation", r.strict_spectrum_deviation},
        {"strict_loading_deviation", r.strict_loading_deviation},
        {"scale_factor", r.scale_factor},
        {"projector_comparison", r.projector_comparison},
        {"pass", r.pass},
        {"strict_pass", r.strict_pass},
    };
}

json to_json(const unique::UniquenessResult& r) {
    return json::array({
        {{"p", r.p}, {"constraint_set", "i+ii"}, {"solution_space_dim", r.homogeneous_dim}},
        {{"p", r.p},
         {"constraint_set", "i+ii+iii"},
         {"solution_space_dim", r.solution_space_dim},
         {"max_deviation_from_diag", r.max_deviation_from_diag},
         {"residual", r.residual}},
    });
}

json to_json(const deep::DeepStack& stack) {
    json layers = json::array();
    for (const auto& layer : stack.layers) {
        layers.push_back({
            {"W", to_json(layer.weights)},
            {"M_in", to_json(layer.input_metric.matrix().matrix())},
            {"M_out", to_json(layer.output_metric.matrix().matrix())},
            {"spectrum", layer.spectrum},
        });
    }
    return {{"activation", deep::to_string(stack.activation)}, {"layers", std::move(layers)}};
}

json to_json(const deep::DepthReport& r) {
    return {
        {"layer_spectrum_deviation", r.layer_spectrum_deviation},
        {"strict_layer_spectrum_deviation", r.strict_layer_spectrum_deviation},
        {"representation_deviation", r.representation_deviation},
        {"strict_representation_deviation", r.strict_representation_deviation},
        {"spectrum_only", r.spectrum_only},
        {"pass", r.pass},
        {"strict_pass", r.strict_pass},
    };
}

json to_json(const deep::DeepConfig& c) {
    return {
        {"dims", c.dims},
        {"policy", deep::to_string(c.policy)},
        {"rule", c.rule.name()},
        {"activation", deep::to_string(c.activation)},
        {"seed", c.seed},
    };
}

} // namespace mapca::io
