#pragma once

#include <string>

namespace qcr {

/// SHA-256 digest of a byte string, hex-encoded.
std::string sha256_hex(const std::string& data);

}  // namespace qcr
