#pragma once

// BLS12-381 pairing arithmetic: base field in Montgomery form, the
// Fp2/Fp6/Fp12 tower, both curve groups, and the optimal ate pairing.
// Variable-time arithmetic throughout; constant-time execution is a
// non-goal for this toolkit.

#include <array>
#include <cstdint>
#include <optional>

namespace xdpre::bls {

// ---- field elements (little-endian limbs, Montgomery form) ----

struct Fp {
    std::array<uint64_t, 6> v;
};

struct Fr {
    std::array<uint64_t, 4> v;
};

struct Fp2 {
    Fp c0, c1; // c0 + c1*u, u^2 = -1
};

struct Fp6 {
    Fp2 c0, c1, c2; // c0 + c1*v + c2*v^2, v^3 = 1 + u
};

struct Fp12 {
    Fp6 c0, c1; // c0 + c1*w, w^2 = v
};

// ---- curve points (affine) ----

struct G1Affine {
    Fp x, y;
    bool inf;
};

struct G2Affine {
    Fp2 x, y;
    bool inf;
};

// ---- Fp ----

Fp fp_zero();
Fp fp_one();
Fp fp_from_u64(uint64_t x);
bool fp_is_zero(const Fp& a);
bool fp_eq(const Fp& a, const Fp& b);
Fp fp_add(const Fp& a, const Fp& b);
Fp fp_sub(const Fp& a, const Fp& b);
Fp fp_neg(const Fp& a);
Fp fp_mul(const Fp& a, const Fp& b);
Fp fp_sqr(const Fp& a);
Fp fp_inv(const Fp& a); // a != 0
Fp fp_pow(const Fp& base, const uint64_t* exp, size_t limbs);
std::optional<Fp> fp_sqrt(const Fp& a);
bool fp_lex_larger(const Fp& a); // canonical(a) > (p-1)/2
std::optional<Fp> fp_from_bytes(const uint8_t* be48); // rejects >= p
Fp fp_from_bytes_mod(const uint8_t* be48);            // reduces mod p
void fp_to_bytes(const Fp& a, uint8_t* be48);

// ---- Fr ----

Fr fr_zero();
Fr fr_one();
Fr fr_from_u64(uint64_t x);
bool fr_is_zero(const Fr& a);
bool fr_eq(const Fr& a, const Fr& b);
Fr fr_add(const Fr& a, const Fr& b);
Fr fr_sub(const Fr& a, const Fr& b);
Fr fr_neg(const Fr& a);
Fr fr_mul(const Fr& a, const Fr& b);
Fr fr_inv(const Fr& a); // a != 0
Fr fr_pow_u64(const Fr& base, uint64_t exp);
std::optional<Fr> fr_from_bytes(const uint8_t* be32); // rejects >= r
void fr_to_bytes(const Fr& a, uint8_t* be32);
// Interprets a 32-byte digest as an integer and maps it to [1, r-1].
Fr fr_from_digest_nonzero(const uint8_t* be32);

// ---- Fp2 ----

Fp2 fp2_zero();
Fp2 fp2_one();
bool fp2_is_zero(const Fp2& a);
bool fp2_eq(const Fp2& a, const Fp2& b);
Fp2 fp2_add(const Fp2& a, const Fp2& b);
Fp2 fp2_sub(const Fp2& a, const Fp2& b);
Fp2 fp2_neg(const Fp2& a);
Fp2 fp2_conj(const Fp2& a);
Fp2 fp2_mul(const Fp2& a, const Fp2& b);
Fp2 fp2_sqr(const Fp2& a);
Fp2 fp2_inv(const Fp2& a);
Fp2 fp2_mul_fp(const Fp2& a, const Fp& s);
Fp2 fp2_mul_xi(const Fp2& a); // multiply by 1 + u
Fp2 fp2_pow(const Fp2& base, const uint64_t* exp, size_t limbs);
std::optional<Fp2> fp2_sqrt(const Fp2& a);
bool fp2_lex_larger(const Fp2& a);

// ---- Fp12 ----

Fp12 fp12_zero();
Fp12 fp12_one();
bool fp12_is_one(const Fp12& a);
bool fp12_eq(const Fp12& a, const Fp12& b);
Fp12 fp12_mul(const Fp12& a, const Fp12& b);
Fp12 fp12_sqr(const Fp12& a);
Fp12 fp12_inv(const Fp12& a);
Fp12 fp12_conj(const Fp12& a); // c0 - c1*w, equals x^(p^6)
Fp12 fp12_frob(const Fp12& a); // x^p
Fp12 fp12_pow(const Fp12& base, const uint64_t* exp, size_t limbs);
std::optional<Fp12> fp12_from_bytes(const uint8_t* be576);
void fp12_to_bytes(const Fp12& a, uint8_t* be576);

// ---- G1 ----

G1Affine g1_infinity();
const G1Affine& g1_generator();
bool g1_eq(const G1Affine& a, const G1Affine& b);
G1Affine g1_add(const G1Affine& a, const G1Affine& b);
G1Affine g1_neg(const G1Affine& a);
G1Affine g1_mul(const G1Affine& a, const Fr& k);
bool g1_on_curve(const G1Affine& a);
bool g1_in_subgroup(const G1Affine& a);
G1Affine g1_clear_cofactor(const G1Affine& a);
void g1_to_bytes(const G1Affine& a, uint8_t* out48);
std::optional<G1Affine> g1_from_bytes(const uint8_t* in48); // validates subgroup

// ---- G2 ----

G2Affine g2_infinity();
const G2Affine& g2_generator();
bool g2_eq(const G2Affine& a, const G2Affine& b);
G2Affine g2_add(const G2Affine& a, const G2Affine& b);
G2Affine g2_neg(const G2Affine& a);
G2Affine g2_mul(const G2Affine& a, const Fr& k);
bool g2_on_curve(const G2Affine& a);
bool g2_in_subgroup(const G2Affine& a);
void g2_to_bytes(const G2Affine& a, uint8_t* out96);
std::optional<G2Affine> g2_from_bytes(const uint8_t* in96); // validates subgroup

// ---- pairing ----

// Bilinear, non-degenerate map E(Fp) x E'(Fp2) -> Fp12 of order r.
// Computed as the cube of the optimal ate pairing (the hard part of the
// final exponentiation uses the exponent 3*(p^4 - p^2 + 1)/r); a fixed
// power of a pairing is itself a pairing, and every value in this library
// comes from the same map, so the cube is consistent everywhere.
Fp12 pairing(const G1Affine& p, const G2Affine& q);

const Fp12& gt_generator(); // pairing(g1_generator(), g2_generator())

} // namespace xdpre::bls
