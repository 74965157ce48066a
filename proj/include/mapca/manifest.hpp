#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

namespace mapca {

inline constexpr const char* tool_version = "0.1.0";

/// Provenance record embedded in every artifact. Identical manifests over
/// identical inputs produce identical artifacts.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> parameters;
    std::uint64_t seed = 0;
    std::string tool_version = mapca::tool_version;
    /// SHA-256 over the concatenated input file contents.
    std::string input_digest;
    /// Command-specific results attached to the manifest.
    nlohmann::json extra = nlohmann::json::object();

    nlohmann::json to_json() const;
};

std::string sha256_hex(std::string_view bytes);

} // namespace mapca
