#pragma once

// Pairing-group abstraction with two interchangeable backends: the BLS12-381
// production curve and a debug backend that tracks exponents over a small
// prime field, making every group identity hand-checkable.  All values are
// immutable after construction; randomness always comes from a caller-owned
// generator.

#include <cstdint>
#include <string>
#include <variant>

#include "xdpre/bls12381.hpp"
#include "xdpre/bytes.hpp"
#include "xdpre/rng.hpp"

namespace xdpre::groups {

enum class BackendId : uint8_t { debug = 0x00, curve = 0x01 };

namespace detail {
// Debug representation: a group element is the exponent of the implicit
// generator, a scalar is a residue; both live in Z_prime.
struct DebugRep {
    uint64_t value;
    uint32_t prime;
    bool operator==(const DebugRep&) const = default;
};
} // namespace detail

class Backend;
class G1Elem;
class G2Elem;
class GTElem;
GTElem pair(const G1Elem& a, const G2Elem& b);

class Scalar {
public:
    BackendId backend_id() const;
    bool is_zero() const;
    bool operator==(const Scalar& other) const;
    Scalar operator+(const Scalar& other) const;
    Scalar operator-(const Scalar& other) const;
    Scalar operator*(const Scalar& other) const;
    Scalar operator-() const;
    Scalar inverse() const;        // InvalidParameter on zero
    Scalar pow(uint64_t e) const;
    uint64_t debug_value() const;  // InvalidParameter on the curve backend
    std::string to_decimal() const;

private:
    friend class Backend;
    friend class G1Elem;
    friend class G2Elem;
    friend class GTElem;
    friend Bytes serialize(const Scalar& s);
    friend Backend backend_of(const Scalar& s);
    explicit Scalar(detail::DebugRep rep) : rep_(rep) {}
    explicit Scalar(const bls::Fr& fr) : rep_(fr) {}
    std::variant<detail::DebugRep, bls::Fr> rep_;
};

class G1Elem {
public:
    BackendId backend_id() const;
    bool is_identity() const;
    bool operator==(const G1Elem& other) const;
    G1Elem operator*(const G1Elem& other) const; // group operation
    G1Elem pow(const Scalar& e) const;
    G1Elem inverse() const;
    uint64_t debug_exponent() const;

private:
    friend class Backend;
    friend class GTElem;
    friend GTElem pair(const G1Elem& a, const G2Elem& b);
    friend Bytes serialize(const G1Elem& e);
    friend Backend backend_of(const G1Elem& e);
    explicit G1Elem(detail::DebugRep rep) : rep_(rep) {}
    explicit G1Elem(const bls::G1Affine& p) : rep_(p) {}
    std::variant<detail::DebugRep, bls::G1Affine> rep_;
};

class G2Elem {
public:
    BackendId backend_id() const;
    bool is_identity() const;
    bool operator==(const G2Elem& other) const;
    G2Elem operator*(const G2Elem& other) const;
    G2Elem pow(const Scalar& e) const;
    G2Elem inverse() const;
    uint64_t debug_exponent() const;

private:
    friend class Backend;
    friend GTElem pair(const G1Elem& a, const G2Elem& b);
    friend Bytes serialize(const G2Elem& e);
    friend Backend backend_of(const G2Elem& e);
    explicit G2Elem(detail::DebugRep rep) : rep_(rep) {}
    explicit G2Elem(const bls::G2Affine& p) : rep_(p) {}
    std::variant<detail::DebugRep, bls::G2Affine> rep_;
};

class GTElem {
public:
    BackendId backend_id() const;
    bool is_identity() const;
    bool operator==(const GTElem& other) const;
    GTElem operator*(const GTElem& other) const;
    GTElem operator/(const GTElem& other) const;
    GTElem pow(const Scalar& e) const;
    GTElem inverse() const;
    uint64_t debug_exponent() const;

private:
    friend class Backend;
    friend GTElem pair(const G1Elem& a, const G2Elem& b);
    friend Bytes serialize(const GTElem& e);
    friend Backend backend_of(const GTElem& e);
    explicit GTElem(detail::DebugRep rep) : rep_(rep) {}
    explicit GTElem(const bls::Fp12& f) : rep_(f) {}
    std::variant<detail::DebugRep, bls::Fp12> rep_;
};

// Same discrete log on both sides of the pairing; used for every published
// element that the scheme pairs on either side.
struct DualElem {
    G1Elem g1_part;
    G2Elem g2_part;

    DualElem pow(const Scalar& e) const { return {g1_part.pow(e), g2_part.pow(e)}; }
    bool operator==(const DualElem& other) const {
        return g1_part == other.g1_part && g2_part == other.g2_part;
    }
};

GTElem pair(const G1Elem& a, const G2Elem& b);

class Backend {
public:
    // prime must be an odd prime in [3, 2^32); InvalidParameter otherwise
    static Backend debug_backend(uint64_t prime = 101);
    static Backend curve_backend();

    BackendId id() const { return id_; }
    uint64_t debug_prime() const; // InvalidParameter on the curve backend
    bool operator==(const Backend& other) const = default;

    // scalars
    Scalar scalar_from_u64(uint64_t v) const;
    Scalar scalar_from_decimal(const std::string& text) const; // DecodeError
    Scalar random_scalar(Rng& rng) const;
    Scalar random_nonzero_scalar(Rng& rng) const;
    Scalar hash_to_scalar(BytesView data) const; // result in [1, order-1]

    // generators and identities
    G1Elem g1() const;
    G2Elem g2() const;
    GTElem gt() const; // pair(g1, g2)
    DualElem dual_generator() const;
    G1Elem g1_identity() const;
    G2Elem g2_identity() const;
    GTElem gt_identity() const;

    G1Elem hash_to_g1(BytesView label) const;    // EmptyLabel on empty input
    GTElem encode_message(BytesView msg) const;  // EmptyMessage on empty input
    GTElem random_gt(Rng& rng) const;

    // deserialization (the encoding does not carry the debug prime, so a
    // Backend provides the context)
    Scalar parse_scalar(BytesView bytes) const;
    G1Elem parse_g1(BytesView bytes) const;
    G2Elem parse_g2(BytesView bytes) const;
    GTElem parse_gt(BytesView bytes) const;

private:
    Backend(BackendId id, uint32_t prime) : id_(id), prime_(prime) {}
    void check_header(BytesView bytes, uint8_t tag, size_t payload_len) const;
    BackendId id_;
    uint32_t prime_; // 0 on the curve backend
};

// encoding: 1-byte tag (0x01 G1, 0x02 G2, 0x03 GT, 0x04 scalar),
// 1-byte backend id, big-endian payload (compressed point / canonical
// field bytes on the curve backend; 4-byte exponent on the debug backend)
Bytes serialize(const Scalar& s);
Bytes serialize(const G1Elem& e);
Bytes serialize(const G2Elem& e);
Bytes serialize(const GTElem& e);

// pair(d.g1_part, g2) == pair(g1, d.g2_part)
bool consistent_dual(const Backend& backend, const DualElem& d);

// Backend an element belongs to (with the debug prime recovered)
Backend backend_of(const Scalar& s);
Backend backend_of(const G1Elem& e);
Backend backend_of(const G2Elem& e);
Backend backend_of(const GTElem& e);

} // namespace xdpre::groups
