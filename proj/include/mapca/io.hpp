#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mapca/deep.hpp"
#include "mapca/equiv.hpp"
#include "mapca/graphspec.hpp"
#include "mapca/unique.hpp"

namespace mapca::io {

using json = nlohmann::json;

/// Comma-separated numeric rows. A first line containing a non-numeric field
/// is taken as a header and skipped; blank lines are ignored. Throws
/// ErrorKind::malformed_input on ragged rows or unparsable fields.
Matrix read_csv(std::istream& in);
Matrix read_csv_text(std::string_view text);

/// Whole file as bytes; throws ErrorKind::malformed_input when unreadable.
std::string read_file(const std::string& path);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::string& path, std::string_view contents);

/// All temporaries are written before any rename, so a failed write leaves
/// none of the targets touched.
void write_atomic(const std::vector<std::pair<std::string, std::string>>& files);

/// %.17g
std::string format_double(double v);

/// "vertex,coord_1,...,coord_k" followed by one row per vertex.
std::string embedding_csv(const graph::Embedding& embedding);

json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
json to_json(const equiv::EquivarianceReport& r);
json to_json(const unique::UniquenessResult& r);
json to_json(const deep::DeepStack& stack);
json to_json(const deep::DepthReport& r);
json to_json(const deep::DeepConfig& c);

} // namespace mapca::io
