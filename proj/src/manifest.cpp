#include "mapca/manifest.hpp"

#include <array>
#include <cstdio>

#include <openssl/evp.h>

#include "mapca/error.hpp"

namespace mapca {

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j = {
        {"command", command},
        {"parameters", parameters},
        {"seed", seed},
        {"tool_version", tool_version},
        {"input_digest", input_digest},
    };
    for (const auto& [key, value] : extra.items()) j[key] = value;
    return j;
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    require(EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) == 1,
            ErrorKind::invalid_argument, "sha256: digest computation failed");
    std::string hex;
    hex.reserve(2 * len);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

} // namespace mapca
