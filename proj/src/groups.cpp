#include "xdpre/groups.hpp"

#include <algorithm>

#include "xdpre/errors.hpp"

namespace xdpre::groups {

namespace {

using detail::DebugRep;

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

uint64_t mulmod_small(uint64_t a, uint64_t b, uint64_t p) { return (a * b) % p; }

uint64_t powmod_small(uint64_t base, uint64_t exp, uint64_t p) {
    uint64_t acc = 1 % p;
    base %= p;
    while (exp) {
        if (exp & 1) acc = mulmod_small(acc, base, p);
        base = mulmod_small(base, base, p);
        exp >>= 1;
    }
    return acc;
}

void check_same(const DebugRep& a, const DebugRep& b) {
    if (a.prime != b.prime)
        throw BackendMismatch("debug elements use different primes");
}

[[noreturn]] void throw_mismatch() {
    throw BackendMismatch("operands come from different backends");
}

// digest bytes reduced into [1, m-1] (m = debug modulus)
uint64_t digest_mod_nonzero(const std::array<uint8_t, 32>& d, uint64_t m) {
    uint64_t acc = 0;
    for (uint8_t byte : d) acc = (acc * 256 + byte) % (m - 1);
    return acc + 1;
}

std::array<uint64_t, 4> fr_canonical_limbs(const bls::Fr& v) {
    uint8_t be[32];
    bls::fr_to_bytes(v, be);
    std::array<uint64_t, 4> limbs{};
    for (int i = 0; i < 32; ++i)
        limbs[(31 - i) / 8] |= (uint64_t)be[i] << (((31 - i) % 8) * 8);
    return limbs;
}

bls::Fr fr_random(Rng& rng) {
    for (;;) {
        uint8_t be[32];
        for (int i = 0; i < 4; ++i) {
            uint64_t w = rng();
            for (int b = 0; b < 8; ++b) be[i * 8 + b] = (uint8_t)(w >> (56 - 8 * b));
        }
        be[0] &= 0x7f; // the scalar field order has 255 bits
        if (auto v = bls::fr_from_bytes(be)) return *v;
    }
}

void append_u32_be(Bytes& out, uint32_t v) {
    out.push_back((uint8_t)(v >> 24));
    out.push_back((uint8_t)(v >> 16));
    out.push_back((uint8_t)(v >> 8));
    out.push_back((uint8_t)v);
}

constexpr uint8_t TAG_G1 = 0x01;
constexpr uint8_t TAG_G2 = 0x02;
constexpr uint8_t TAG_GT = 0x03;
constexpr uint8_t TAG_SCALAR = 0x04;

template <class CurveRep, class WriteCurve>
Bytes serialize_any(uint8_t tag, const std::variant<DebugRep, CurveRep>& rep,
                    size_t curve_len, WriteCurve&& write_curve) {
    Bytes out;
    out.push_back(tag);
    if (std::holds_alternative<DebugRep>(rep)) {
        out.push_back((uint8_t)BackendId::debug);
        append_u32_be(out, (uint32_t)std::get<DebugRep>(rep).value);
    } else {
        out.push_back((uint8_t)BackendId::curve);
        size_t off = out.size();
        out.resize(off + curve_len);
        write_curve(std::get<CurveRep>(rep), out.data() + off);
    }
    return out;
}

} // namespace

// ---- Scalar ----

BackendId Scalar::backend_id() const {
    return std::holds_alternative<DebugRep>(rep_) ? BackendId::debug : BackendId::curve;
}

bool Scalar::is_zero() const {
    if (auto* d = std::get_if<DebugRep>(&rep_)) return d->value == 0;
    return bls::fr_is_zero(std::get<bls::Fr>(rep_));
}

bool Scalar::operator==(const Scalar& other) const {
    if (rep_.index() != other.rep_.index()) return false;
    if (auto* d = std::get_if<DebugRep>(&rep_))
        return *d == std::get<DebugRep>(other.rep_);
    return bls::fr_eq(std::get<bls::Fr>(rep_), std::get<bls::Fr>(other.rep_));
}

Scalar Scalar::operator+(const Scalar& other) const {
    if (rep_.index() != other.rep_.index()) throw_mismatch();
    if (auto* d = std::get_if<DebugRep>(&rep_)) {
        const auto& e = std::get<DebugRep>(other.rep_);
        check_same(*d, e);
        return Scalar(DebugRep{(d->value + e.value) % d->prime, d->prime});
    }
    return Scalar(bls::fr_add(std::get<bls::Fr>(rep_), std::get<bls::Fr>(other.rep_)));
}

Scalar Scalar::operator-(const Scalar& other) const { return *this + (-other); }

Scalar Scalar::operator*(const Scalar& other) const {
    if (rep_.index() != other.rep_.index()) throw_mismatch();
    if (auto* d = std::get_if<DebugRep>(&rep_)) {
        const auto& e = std::get<DebugRep>(other.rep_);
        check_same(*d, e);
        return Scalar(DebugRep{mulmod_small(d->value, e.value, d->prime), d->prime});
    }
    return Scalar(bls::fr_mul(std::get<bls::Fr>(rep_), std::get<bls::Fr>(other.rep_)));
}

Scalar Scalar::operator-() const {
    if (auto* d = std::get_if<DebugRep>(&rep_))
        return Scalar(DebugRep{(d->prime - d->value) % d->prime, d->prime});
    return Scalar(bls::fr_neg(std::get<bls::Fr>(rep_)));
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw InvalidParameter("zero scalar has no inverse");
    if (auto* d = std::get_if<DebugRep>(&rep_))
        return Scalar(DebugRep{powmod_small(d->value, d->prime - 2, d->prime), d->prime});
    return Scalar(bls::fr_inv(std::get<bls::Fr>(rep_)));
}

Scalar Scalar::pow(uint64_t e) const {
    if (auto* d = std::get_if<DebugRep>(&rep_))
        return Scalar(DebugRep{powmod_small(d->value, e, d->prime), d->prime});
    return Scalar(bls::fr_pow_u64(std::get<bls::Fr>(rep_), e));
}

uint64_t Scalar::debug_value() const {
    if (auto* d = std::get_if<DebugRep>(&rep_)) return d->value;
    throw InvalidParameter("debug_value is only available on the debug backend");
}

std::string Scalar::to_decimal() const {
    if (auto* d = std::get_if<DebugRep>(&rep_)) return std::to_string(d->value);
    auto limbs = fr_canonical_limbs(std::get<bls::Fr>(rep_));
    std::string out;
    while (true) {
        bool zero = true;
        for (uint64_t w : limbs)
            if (w) zero = false;
        if (zero) break;
        uint64_t rem = 0;
        for (size_t i = 4; i-- > 0;) {
            unsigned __int128 cur = ((unsigned __int128)rem << 64) | limbs[i];
            limbs[i] = (uint64_t)(cur / 10);
            rem = (uint64_t)(cur % 10);
        }
        out.push_back((char)('0' + rem));
    }
    if (out.empty()) out = "0";
    std::reverse(out.begin(), out.end());
    return out;
}

// ---- group element shared machinery ----

namespace {

template <class Rep>
BackendId rep_backend(const std::variant<DebugRep, Rep>& rep) {
    return std::holds_alternative<DebugRep>(rep) ? BackendId::debug : BackendId::curve;
}

} // namespace

// ---- G1Elem ----

BackendId G1Elem::backend_id() const { return rep_backend(rep_); }

bool G1Elem::is_identity() const {
    if (auto* d = std::get_if<DebugRep>(&rep_)) return d->value == 0;
    return std::get<bls::G1Affine>(rep_).inf;
}

bool G1Elem::operator==(const G1Elem& other) const {
    if (rep_.index() != other.rep_.index()) return false;
    if (auto* d = std::get_if<DebugRep>(&rep_)) return *d == std::get<DebugRep>(other.rep_);
    return bls::g1_eq(std::get<bls::G1Affine>(rep_), std::get<bls::G1Affine>(other.rep_));
}

G1Elem G1Elem::operator*(const G1Elem& other) const {
    if (rep_.index() != other.rep_.index()) throw_mismatch();
    if (auto* d = std::get_if<DebugRep>(&rep_)) {
        const auto& e = std::get<DebugRep>(other.rep_);
        check_same(*d, e);
        return G1Elem(DebugRep{(d->value + e.value) % d->prime, d->prime});
    }
    return G1Elem(bls::g1_add(std::get<bls::G1Affine>(rep_), std::get<bls::G1Affine>(other.rep_)));
}

G1Elem G1Elem::pow(const Scalar& e) const {
    if (rep_.index() != e.rep_.index()) throw_mismatch();
    if (auto* d = std::get_if<DebugRep>(&rep_)) {
        const auto& s = std::get<DebugRep>(e.rep_);
        check_same(*d, s);
        return G1Elem(DebugRep{mulmod_small(d->value, s.value, d->prime), d->prime});
    }
    return G1Elem(bls::g1_mul(std::get<bls::G1Affine>(rep_), std::get<bls::Fr>(e.rep_)));
}

G1Elem G1Elem::inverse() const {
    if (auto* d = std::get_if<DebugRep>(&rep_))
        return G1Elem(DebugRep{(d->prime - d->value) % d->prime, d->prime});
    return G1Elem(bls::g1_neg(std::get<bls::G1Affine>(rep_)));
}

uint64_t G1Elem::debug_exponent() const {
    if (auto* d = std::get_if<DebugRep>(&rep_)) return d->value;
    throw InvalidParameter("debug_exponent is only available on the debug backend");
}

// ---- G2Elem ----

BackendId G2Elem::backend_id() const { return rep_backend(rep_); }

bool G2Elem::is_identity() const {
    if (auto* d = std::get_if<DebugRep>(&rep_)) return d->value == 0;
    return std::get<bls::G2Affine>(rep_).inf;
}

bool G2Elem::operator==(const G2Elem& other) const {
    if (rep_.index() != other.rep_.index()) return false;
    if (auto* d = std::get_if<DebugRep>(&rep_)) return *d == std::get<DebugRep>(other.rep_);
    return bls::g2_eq(std::get<bls::G2Affine>(rep_), std::get<bls::G2Affine>(other.rep_));
}

G2Elem G2Elem::operator*(const G2Elem& other) const {
    if (rep_.index() != other.rep_.index()) throw_mismatch();
    if (auto* d = std::get_if<DebugRep>(&rep_)) {
        const auto& e = std::get<DebugRep>(other.rep_);
        check_same(*d, e);
        return G2Elem(DebugRep{(d->value + e.value) % d->prime, d->prime});
    }
    return G2Elem(bls::g2_add(std::get<bls::G2Affine>(rep_), std::get<bls::G2Affine>(other.rep_)));
}

G2Elem G2Elem::pow(const Scalar& e) const {
    if (rep_.index() != e.rep_.index()) throw_mismatch();
    if (auto* d = std::get_if<DebugRep>(&rep_)) {
        const auto& s = std::get<DebugRep>(e.rep_);
        check_same(*d, s);
        return G2Elem(DebugRep{mulmod_small(d->value, s.value, d->prime), d->prime});
    }
    return G2Elem(bls::g2_mul(std::get<bls::G2Affine>(rep_), std::get<bls::Fr>(e.rep_)));
}

G2Elem G2Elem::inverse() const {
    if (auto* d = std::get_if<DebugRep>(&rep_))
        return G2Elem(DebugRep{(d->prime - d->value) % d->prime, d->prime});
    return G2Elem(bls::g2_neg(std::get<bls::G2Affine>(rep_)));
}

uint64_t G2Elem::debug_exponent() const {
    if (auto* d = std::get_if<DebugRep>(&rep_)) return d->value;
    throw InvalidParameter("debug_exponent is only available on the debug backend");
}

// ---- GTElem ----

BackendId GTElem::backend_id() const { return rep_backend(rep_); }

bool GTElem::is_identity() const {
    if (auto* d = std::get_if<DebugRep>(&rep_)) return d->value == 0;
    return bls::fp12_is_one(std::get<bls::Fp12>(rep_));
}

bool GTElem::operator==(const GTElem& other) const {
    if (rep_.index() != other.rep_.index()) return false;
    if (auto* d = std::get_if<DebugRep>(&rep_)) return *d == std::get<DebugRep>(other.rep_);
    return bls::fp12_eq(std::get<bls::Fp12>(rep_), std::get<bls::Fp12>(other.rep_));
}

GTElem GTElem::operator*(const GTElem& other) const {
    if (rep_.index() != other.rep_.index()) throw_mismatch();
    if (auto* d = std::get_if<DebugRep>(&rep_)) {
        const auto& e = std::get<DebugRep>(other.rep_);
        check_same(*d, e);
        return GTElem(DebugRep{(d->value + e.value) % d->prime, d->prime});
    }
    return GTElem(bls::fp12_mul(std::get<bls::Fp12>(rep_), std::get<bls::Fp12>(other.rep_)));
}

GTElem GTElem::operator/(const GTElem& other) const { return *this * other.inverse(); }

GTElem GTElem::pow(const Scalar& e) const {
    if (rep_.index() != e.rep_.index()) throw_mismatch();
    if (auto* d = std::get_if<DebugRep>(&rep_)) {
        const auto& s = std::get<DebugRep>(e.rep_);
        check_same(*d, s);
        return GTElem(DebugRep{mulmod_small(d->value, s.value, d->prime), d->prime});
    }
    auto limbs = fr_canonical_limbs(std::get<bls::Fr>(e.rep_));
    return GTElem(bls::fp12_pow(std::get<bls::Fp12>(rep_), limbs.data(), 4));
}

GTElem GTElem::inverse() const {
    if (auto* d = std::get_if<DebugRep>(&rep_))
        return GTElem(DebugRep{(d->prime - d->value) % d->prime, d->prime});
    return GTElem(bls::fp12_inv(std::get<bls::Fp12>(rep_)));
}

uint64_t GTElem::debug_exponent() const {
    if (auto* d = std::get_if<DebugRep>(&rep_)) return d->value;
    throw InvalidParameter("debug_exponent is only available on the debug backend");
}

// ---- pairing ----

GTElem pair(const G1Elem& a, const G2Elem& b) {
    if (a.rep_.index() != b.rep_.index()) throw_mismatch();
    if (auto* d = std::get_if<DebugRep>(&a.rep_)) {
        const auto& e = std::get<DebugRep>(b.rep_);
        check_same(*d, e);
        return GTElem(DebugRep{mulmod_small(d->value, e.value, d->prime), d->prime});
    }
    return GTElem(bls::pairing(std::get<bls::G1Affine>(a.rep_), std::get<bls::G2Affine>(b.rep_)));
}

// ---- Backend ----

Backend Backend::debug_backend(uint64_t prime) {
    if (prime < 3 || prime >= (1ull << 32) || !is_prime_u64(prime))
        throw InvalidParameter("debug modulus must be an odd prime below 2^32");
    return Backend(BackendId::debug, (uint32_t)prime);
}

Backend Backend::curve_backend() { return Backend(BackendId::curve, 0); }

uint64_t Backend::debug_prime() const {
    if (id_ != BackendId::debug)
        throw InvalidParameter("the curve backend has no debug modulus");
    return prime_;
}

Scalar Backend::scalar_from_u64(uint64_t v) const {
    if (id_ == BackendId::debug) return Scalar(DebugRep{v % prime_, prime_});
    return Scalar(bls::fr_from_u64(v));
}

Scalar Backend::scalar_from_decimal(const std::string& text) const {
    if (text.empty() || text.size() > 78)
        throw DecodeError("scalar decimal at offset 0: bad length");
    for (size_t i = 0; i < text.size(); ++i)
        if (text[i] < '0' || text[i] > '9')
            throw DecodeError("scalar decimal at offset " + std::to_string(i) +
                              ": expected digit");
    if (id_ == BackendId::debug) {
        unsigned __int128 acc = 0;
        for (char c : text) {
            acc = acc * 10 + (c - '0');
            if (acc >= ((unsigned __int128)prime_ << 32))
                throw DecodeError("scalar decimal: value exceeds the field modulus");
        }
        if (acc >= prime_) throw DecodeError("scalar decimal: value exceeds the field modulus");
        return Scalar(DebugRep{(uint64_t)acc, prime_});
    }
    // accumulate into a 5-limb integer, then require < r
    std::array<uint64_t, 5> acc{};
    for (char c : text) {
        unsigned __int128 carry = c - '0';
        for (auto& limb : acc) {
            unsigned __int128 cur = (unsigned __int128)limb * 10 + carry;
            limb = (uint64_t)cur;
            carry = cur >> 64;
        }
        if (carry) throw DecodeError("scalar decimal: value exceeds the field modulus");
    }
    uint8_t be[32];
    if (acc[4]) throw DecodeError("scalar decimal: value exceeds the field modulus");
    for (int i = 0; i < 32; ++i) be[i] = (uint8_t)(acc[(31 - i) / 8] >> (((31 - i) % 8) * 8));
    auto v = bls::fr_from_bytes(be);
    if (!v) throw DecodeError("scalar decimal: value exceeds the field modulus");
    return Scalar(*v);
}

Scalar Backend::random_scalar(Rng& rng) const {
    if (id_ == BackendId::debug) return Scalar(DebugRep{uniform_u64(rng, prime_), prime_});
    return Scalar(fr_random(rng));
}

Scalar Backend::random_nonzero_scalar(Rng& rng) const {
    for (;;) {
        Scalar s = random_scalar(rng);
        if (!s.is_zero()) return s;
    }
}

Scalar Backend::hash_to_scalar(BytesView data) const {
    auto digest = sha256(data);
    if (id_ == BackendId::debug)
        return Scalar(DebugRep{digest_mod_nonzero(digest, prime_), prime_});
    return Scalar(bls::fr_from_digest_nonzero(digest.data()));
}

G1Elem Backend::g1() const {
    if (id_ == BackendId::debug) return G1Elem(DebugRep{1, prime_});
    return G1Elem(bls::g1_generator());
}

G2Elem Backend::g2() const {
    if (id_ == BackendId::debug) return G2Elem(DebugRep{1, prime_});
    return G2Elem(bls::g2_generator());
}

GTElem Backend::gt() const {
    if (id_ == BackendId::debug) return GTElem(DebugRep{1, prime_});
    return GTElem(bls::gt_generator());
}

DualElem Backend::dual_generator() const { return {g1(), g2()}; }

G1Elem Backend::g1_identity() const {
    if (id_ == BackendId::debug) return G1Elem(DebugRep{0, prime_});
    return G1Elem(bls::g1_infinity());
}

G2Elem Backend::g2_identity() const {
    if (id_ == BackendId::debug) return G2Elem(DebugRep{0, prime_});
    return G2Elem(bls::g2_infinity());
}

GTElem Backend::gt_identity() const {
    if (id_ == BackendId::debug) return GTElem(DebugRep{0, prime_});
    return GTElem(bls::fp12_one());
}

G1Elem Backend::hash_to_g1(BytesView label) const {
    if (label.empty()) throw EmptyLabel("hash_to_g1 requires a nonempty label");
    if (id_ == BackendId::debug) {
        auto digest = sha256(label);
        uint64_t acc = 0;
        for (uint8_t byte : digest) acc = (acc * 256 + byte) % prime_;
        return G1Elem(DebugRep{acc, prime_});
    }
    // hash-and-check: derive candidate x-coordinates from the label until one
    // lands on the curve, then clear the cofactor; deterministic per label
    Bytes buf(label.begin(), label.end());
    buf.resize(buf.size() + 4);
    for (uint32_t ctr = 0;; ++ctr) {
        for (int i = 0; i < 4; ++i)
            buf[buf.size() - 4 + i] = (uint8_t)(ctr >> (24 - 8 * i));
        auto digest = sha384(buf);
        bls::Fp x = bls::fp_from_bytes_mod(digest.data());
        bls::Fp rhs = bls::fp_add(bls::fp_mul(bls::fp_sqr(x), x), bls::fp_from_u64(4));
        auto y = bls::fp_sqrt(rhs);
        if (!y) continue;
        if (bls::fp_lex_larger(*y)) *y = bls::fp_neg(*y);
        bls::G1Affine p = bls::g1_clear_cofactor({x, *y, false});
        if (p.inf) continue;
        return G1Elem(p);
    }
}

GTElem Backend::encode_message(BytesView msg) const {
    if (msg.empty()) throw EmptyMessage("encode_message requires a nonempty message");
    return gt().pow(hash_to_scalar(msg));
}

GTElem Backend::random_gt(Rng& rng) const { return gt().pow(random_nonzero_scalar(rng)); }

void Backend::check_header(BytesView bytes, uint8_t tag, size_t payload_len) const {
    if (bytes.size() < 2) throw DecodeError("truncated encoding at offset 0");
    if (bytes[0] != tag)
        throw DecodeError("unexpected type tag at offset 0");
    if (bytes[1] != (uint8_t)id_)
        throw DecodeError("backend id at offset 1 does not match the parsing context");
    if (bytes.size() != payload_len + 2)
        throw DecodeError("bad payload length at offset 2: expected " +
                          std::to_string(payload_len) + " bytes, got " +
                          std::to_string(bytes.size() - 2));
}

namespace {

uint64_t parse_debug_payload(BytesView bytes, uint32_t prime) {
    uint64_t v = ((uint64_t)bytes[2] << 24) | ((uint64_t)bytes[3] << 16) |
                 ((uint64_t)bytes[4] << 8) | (uint64_t)bytes[5];
    if (v >= prime) throw DecodeError("debug exponent at offset 2 exceeds the modulus");
    return v;
}

} // namespace

Scalar Backend::parse_scalar(BytesView bytes) const {
    if (id_ == BackendId::debug) {
        check_header(bytes, TAG_SCALAR, 4);
        return Scalar(DebugRep{parse_debug_payload(bytes, prime_), prime_});
    }
    check_header(bytes, TAG_SCALAR, 32);
    auto v = bls::fr_from_bytes(bytes.data() + 2);
    if (!v) throw DecodeError("non-canonical scalar at offset 2");
    return Scalar(*v);
}

G1Elem Backend::parse_g1(BytesView bytes) const {
    if (id_ == BackendId::debug) {
        check_header(bytes, TAG_G1, 4);
        return G1Elem(DebugRep{parse_debug_payload(bytes, prime_), prime_});
    }
    check_header(bytes, TAG_G1, 48);
    auto p = bls::g1_from_bytes(bytes.data() + 2);
    if (!p) throw DecodeError("invalid compressed point at offset 2");
    return G1Elem(*p);
}

G2Elem Backend::parse_g2(BytesView bytes) const {
    if (id_ == BackendId::debug) {
        check_header(bytes, TAG_G2, 4);
        return G2Elem(DebugRep{parse_debug_payload(bytes, prime_), prime_});
    }
    check_header(bytes, TAG_G2, 96);
    auto p = bls::g2_from_bytes(bytes.data() + 2);
    if (!p) throw DecodeError("invalid compressed point at offset 2");
    return G2Elem(*p);
}

GTElem Backend::parse_gt(BytesView bytes) const {
    if (id_ == BackendId::debug) {
        check_header(bytes, TAG_GT, 4);
        return GTElem(DebugRep{parse_debug_payload(bytes, prime_), prime_});
    }
    check_header(bytes, TAG_GT, 576);
    auto f = bls::fp12_from_bytes(bytes.data() + 2);
    if (!f) throw DecodeError("non-canonical field element at offset 2");
    return GTElem(*f);
}

// ---- serialization ----

Bytes serialize(const Scalar& s) {
    return serialize_any(TAG_SCALAR, s.rep_, 32,
                         [](const bls::Fr& v, uint8_t* out) { bls::fr_to_bytes(v, out); });
}

Bytes serialize(const G1Elem& e) {
    return serialize_any(TAG_G1, e.rep_, 48,
                         [](const bls::G1Affine& p, uint8_t* out) { bls::g1_to_bytes(p, out); });
}

Bytes serialize(const G2Elem& e) {
    return serialize_any(TAG_G2, e.rep_, 96,
                         [](const bls::G2Affine& p, uint8_t* out) { bls::g2_to_bytes(p, out); });
}

Bytes serialize(const GTElem& e) {
    return serialize_any(TAG_GT, e.rep_, 576,
                         [](const bls::Fp12& f, uint8_t* out) { bls::fp12_to_bytes(f, out); });
}

bool consistent_dual(const Backend& backend, const DualElem& d) {
    return pair(d.g1_part, backend.g2()) == pair(backend.g1(), d.g2_part);
}

namespace {

template <class Rep>
Backend backend_of_rep(const std::variant<DebugRep, Rep>& rep) {
    if (auto* d = std::get_if<DebugRep>(&rep)) return Backend::debug_backend(d->prime);
    return Backend::curve_backend();
}

} // namespace

Backend backend_of(const Scalar& s) { return backend_of_rep(s.rep_); }
Backend backend_of(const G1Elem& e) { return backend_of_rep(e.rep_); }
Backend backend_of(const G2Elem& e) { return backend_of_rep(e.rep_); }
Backend backend_of(const GTElem& e) { return backend_of_rep(e.rep_); }

} // namespace xdpre::groups
