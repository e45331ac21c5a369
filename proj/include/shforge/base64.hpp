#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shforge {

std::string base64_encode(std::span<const uint8_t> bytes);

// Throws Error on characters outside the alphabet or broken padding.
std::vector<uint8_t> base64_decode(std::string_view text);

}  // namespace shforge
