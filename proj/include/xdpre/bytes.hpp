#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace xdpre {

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

inline Bytes to_bytes(const std::string& s) { return Bytes(s.begin(), s.end()); }

std::string hex_encode(BytesView data);
Bytes hex_decode(const std::string& hex); // throws DecodeError on bad input

std::array<uint8_t, 32> sha256(BytesView data);
std::array<uint8_t, 48> sha384(BytesView data);

} // namespace xdpre
