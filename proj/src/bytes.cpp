#include "xdpre/bytes.hpp"

#include <openssl/evp.h>

#include <stdexcept>

#include "xdpre/errors.hpp"

namespace xdpre {

std::string hex_encode(BytesView data) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

namespace {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

template <size_t N>
std::array<uint8_t, N> evp_digest(const EVP_MD* md, BytesView data) {
    std::array<uint8_t, N> out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, md, nullptr) != 1 ||
        len != N)
        throw std::runtime_error("digest computation failed");
    return out;
}

} // namespace

Bytes hex_decode(const std::string& hex) {
    if (hex.size() % 2 != 0)
        throw DecodeError("hex string at offset " + std::to_string(hex.size()) +
                          ": odd number of digits");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0)
            throw DecodeError("hex string at offset " + std::to_string(i) +
                              ": expected hex digit");
        if (lo < 0)
            throw DecodeError("hex string at offset " + std::to_string(i + 1) +
                              ": expected hex digit");
        out.push_back((uint8_t)((hi << 4) | lo));
    }
    return out;
}

std::array<uint8_t, 32> sha256(BytesView data) { return evp_digest<32>(EVP_sha256(), data); }

std::array<uint8_t, 48> sha384(BytesView data) { return evp_digest<48>(EVP_sha384(), data); }

} // namespace xdpre
