#pragma once

#include <string>
#include <string_view>

namespace bpcm {

// SHA-256 of the exact input bytes as lowercase hex.
std::string sha256_hex(std::string_view data);

}  // namespace bpcm
