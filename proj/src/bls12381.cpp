#include "xdpre/bls12381.hpp"

#include <cstring>

namespace xdpre::bls {
namespace {

// ---- limb primitives (little-endian limb order) ----

template <size_t N>
using L = std::array<uint64_t, N>;

template <size_t N>
bool l_is_zero(const L<N>& a) {
    for (uint64_t w : a)
        if (w) return false;
    return true;
}

template <size_t N>
int l_cmp(const L<N>& a, const L<N>& b) {
    for (size_t i = N; i-- > 0;) {
        if (a[i] < b[i]) return -1;
        if (a[i] > b[i]) return 1;
    }
    return 0;
}

template <size_t N>
uint64_t l_add(L<N>& out, const L<N>& a, const L<N>& b) {
    uint64_t carry = 0;
    for (size_t i = 0; i < N; ++i) {
        unsigned __int128 s = (unsigned __int128)a[i] + b[i] + carry;
        out[i] = (uint64_t)s;
        carry = (uint64_t)(s >> 64);
    }
    return carry;
}

template <size_t N>
uint64_t l_sub(L<N>& out, const L<N>& a, const L<N>& b) {
    uint64_t borrow = 0;
    for (size_t i = 0; i < N; ++i) {
        unsigned __int128 d = (unsigned __int128)a[i] - b[i] - borrow;
        out[i] = (uint64_t)d;
        borrow = (uint64_t)((d >> 64) & 1);
    }
    return borrow;
}

template <size_t N>
void mod_add(L<N>& out, const L<N>& a, const L<N>& b, const L<N>& mod) {
    uint64_t carry = l_add(out, a, b);
    if (carry || l_cmp(out, mod) >= 0) {
        L<N> t;
        l_sub(t, out, mod);
        out = t;
    }
}

template <size_t N>
void mod_sub(L<N>& out, const L<N>& a, const L<N>& b, const L<N>& mod) {
    if (l_sub(out, a, b)) {
        L<N> t;
        l_add(t, out, mod);
        out = t;
    }
}

// Montgomery multiplication (CIOS).  Requires mod < 2^(64N - 1) so a single
// conditional subtraction suffices; both moduli used here satisfy that.
template <size_t N>
void mont_mul(L<N>& out, const L<N>& a, const L<N>& b, const L<N>& mod, uint64_t inv) {
    uint64_t t[N + 2] = {0};
    for (size_t i = 0; i < N; ++i) {
        uint64_t carry = 0;
        for (size_t j = 0; j < N; ++j) {
            unsigned __int128 cur = (unsigned __int128)a[i] * b[j] + t[j] + carry;
            t[j] = (uint64_t)cur;
            carry = (uint64_t)(cur >> 64);
        }
        unsigned __int128 cur = (unsigned __int128)t[N] + carry;
        t[N] = (uint64_t)cur;
        t[N + 1] = (uint64_t)(cur >> 64);

        uint64_t m = t[0] * inv;
        unsigned __int128 acc = (unsigned __int128)m * mod[0] + t[0];
        carry = (uint64_t)(acc >> 64);
        for (size_t j = 1; j < N; ++j) {
            acc = (unsigned __int128)m * mod[j] + t[j] + carry;
            t[j - 1] = (uint64_t)acc;
            carry = (uint64_t)(acc >> 64);
        }
        cur = (unsigned __int128)t[N] + carry;
        t[N - 1] = (uint64_t)cur;
        t[N] = t[N + 1] + (uint64_t)(cur >> 64);
    }
    L<N> r;
    for (size_t j = 0; j < N; ++j) r[j] = t[j];
    if (t[N] != 0 || l_cmp(r, mod) >= 0) {
        L<N> tmp;
        l_sub(tmp, r, mod);
        r = tmp;
    }
    out = r;
}

template <size_t N>
void be_to_limbs(const uint8_t* be, size_t len, L<N>& out) {
    out.fill(0);
    size_t pos = len;
    for (size_t limb = 0; limb < N && pos > 0; ++limb)
        for (int b = 0; b < 8 && pos > 0; ++b)
            out[limb] |= (uint64_t)be[--pos] << (8 * b);
}

template <size_t N>
void limbs_to_be(const L<N>& a, uint8_t* be, size_t len) {
    size_t pos = len;
    for (size_t limb = 0; limb < N && pos > 0; ++limb)
        for (int b = 0; b < 8 && pos > 0; ++b)
            be[--pos] = (uint8_t)(a[limb] >> (8 * b));
}

// ---- field constants ----

constexpr L<6> P = {0xb9feffffffffaaabull, 0x1eabfffeb153ffffull, 0x6730d2a0f6b0f624ull,
                    0x64774b84f38512bfull, 0x4b1ba7b6434bacd7ull, 0x1a0111ea397fe69aull};
constexpr uint64_t P_INV = 0x89f3fffcfffcfffdull;
constexpr L<6> P_R1 = {0x760900000002fffdull, 0xebf4000bc40c0002ull, 0x5f48985753c758baull,
                       0x77ce585370525745ull, 0x5c071a97a256ec6dull, 0x15f65ec3fa80e493ull};
constexpr L<6> P_R2 = {0xf4df1f341c341746ull, 0x0a76e6a609d104f1ull, 0x8de5476c4c95b6d5ull,
                       0x67eb88a9939d83c0ull, 0x9a793e85b519952dull, 0x11988fe592cae3aaull};
// (p+1)/4, (p-3)/4, (p-1)/2, p-2, (p-1)/6: square-root, inversion and
// Frobenius exponents.
constexpr L<6> P_SQRT = {0xee7fbfffffffeaabull, 0x07aaffffac54ffffull, 0xd9cc34a83dac3d89ull,
                         0xd91dd2e13ce144afull, 0x92c6e9ed90d2eb35ull, 0x0680447a8e5ff9a6ull};
constexpr L<6> P_M34 = {0xee7fbfffffffeaaaull, 0x07aaffffac54ffffull, 0xd9cc34a83dac3d89ull,
                        0xd91dd2e13ce144afull, 0x92c6e9ed90d2eb35ull, 0x0680447a8e5ff9a6ull};
constexpr L<6> P_M12 = {0xdcff7fffffffd555ull, 0x0f55ffff58a9ffffull, 0xb39869507b587b12ull,
                        0xb23ba5c279c2895full, 0x258dd3db21a5d66bull, 0x0d0088f51cbff34dull};
constexpr L<6> P_M2 = {0xb9feffffffffaaa9ull, 0x1eabfffeb153ffffull, 0x6730d2a0f6b0f624ull,
                       0x64774b84f38512bfull, 0x4b1ba7b6434bacd7ull, 0x1a0111ea397fe69aull};
constexpr L<6> P_D6 = {0x49aa7ffffffff1c7ull, 0x051caaaa72e35555ull, 0xe688231ad3c82906ull,
                       0xe613e1eb7deb831full, 0x0c849bf3b5e1f223ull, 0x045582fc5eeaa66full};

constexpr L<4> R = {0xffffffff00000001ull, 0x53bda402fffe5bfeull, 0x3339d80809a1d805ull,
                    0x73eda753299d7d48ull};
constexpr uint64_t R_INV = 0xfffffffeffffffffull;
constexpr L<4> R_R1 = {0x00000001fffffffeull, 0x5884b7fa00034802ull, 0x998c4fefecbc4ff5ull,
                       0x1824b159acc5056full};
constexpr L<4> R_R2 = {0xc999e990f3f29c6dull, 0x2b6cedcb87925c23ull, 0x05d314967254398full,
                       0x0748d9d99f59ff11ull};
constexpr L<4> R_M2 = {0xfffffffeffffffffull, 0x53bda402fffe5bfeull, 0x3339d80809a1d805ull,
                       0x73eda753299d7d48ull};

// |z| for the BLS parameter z = -0xd201000000010000.
constexpr uint64_t Z_ABS = 0xd201000000010000ull;
// G1 cofactor (z-1)^2 / 3.
constexpr L<2> H1 = {0x8c00aaab0000aaabull, 0x396c8c005555e156ull};

} // namespace

// ---- Fp ----

Fp fp_zero() { return Fp{{0, 0, 0, 0, 0, 0}}; }
Fp fp_one() { return Fp{P_R1}; }

Fp fp_from_u64(uint64_t x) {
    Fp a{{x, 0, 0, 0, 0, 0}};
    mont_mul(a.v, a.v, P_R2, P, P_INV);
    return a;
}

bool fp_is_zero(const Fp& a) { return l_is_zero(a.v); }
bool fp_eq(const Fp& a, const Fp& b) { return a.v == b.v; }

Fp fp_add(const Fp& a, const Fp& b) {
    Fp out;
    mod_add(out.v, a.v, b.v, P);
    return out;
}

Fp fp_sub(const Fp& a, const Fp& b) {
    Fp out;
    mod_sub(out.v, a.v, b.v, P);
    return out;
}

Fp fp_neg(const Fp& a) { return fp_sub(fp_zero(), a); }

Fp fp_mul(const Fp& a, const Fp& b) {
    Fp out;
    mont_mul(out.v, a.v, b.v, P, P_INV);
    return out;
}

Fp fp_sqr(const Fp& a) { return fp_mul(a, a); }

Fp fp_pow(const Fp& base, const uint64_t* exp, size_t limbs) {
    Fp acc = fp_one();
    bool started = false;
    for (size_t i = limbs; i-- > 0;) {
        for (int bit = 63; bit >= 0; --bit) {
            if (started) acc = fp_sqr(acc);
            if ((exp[i] >> bit) & 1) {
                acc = fp_mul(acc, base);
                started = true;
            }
        }
    }
    return acc;
}

Fp fp_inv(const Fp& a) { return fp_pow(a, P_M2.data(), 6); }

std::optional<Fp> fp_sqrt(const Fp& a) {
    Fp x = fp_pow(a, P_SQRT.data(), 6);
    if (!fp_eq(fp_sqr(x), a)) return std::nullopt;
    return x;
}

bool fp_lex_larger(const Fp& a) {
    L<6> canon;
    L<6> one = {1, 0, 0, 0, 0, 0};
    mont_mul(canon, a.v, one, P, P_INV);
    return l_cmp(canon, P_M12) > 0;
}

std::optional<Fp> fp_from_bytes(const uint8_t* be48) {
    Fp a;
    be_to_limbs(be48, 48, a.v);
    if (l_cmp(a.v, P) >= 0) return std::nullopt;
    mont_mul(a.v, a.v, P_R2, P, P_INV);
    return a;
}

Fp fp_from_bytes_mod(const uint8_t* be48) {
    Fp a;
    be_to_limbs(be48, 48, a.v);
    while (l_cmp(a.v, P) >= 0) {
        L<6> t;
        l_sub(t, a.v, P);
        a.v = t;
    }
    mont_mul(a.v, a.v, P_R2, P, P_INV);
    return a;
}

void fp_to_bytes(const Fp& a, uint8_t* be48) {
    L<6> canon;
    L<6> one = {1, 0, 0, 0, 0, 0};
    mont_mul(canon, a.v, one, P, P_INV);
    limbs_to_be(canon, be48, 48);
}

// ---- Fr ----

Fr fr_zero() { return Fr{{0, 0, 0, 0}}; }
Fr fr_one() { return Fr{R_R1}; }

Fr fr_from_u64(uint64_t x) {
    Fr a{{x, 0, 0, 0}};
    mont_mul(a.v, a.v, R_R2, R, R_INV);
    return a;
}

bool fr_is_zero(const Fr& a) { return l_is_zero(a.v); }
bool fr_eq(const Fr& a, const Fr& b) { return a.v == b.v; }

Fr fr_add(const Fr& a, const Fr& b) {
    Fr out;
    mod_add(out.v, a.v, b.v, R);
    return out;
}

Fr fr_sub(const Fr& a, const Fr& b) {
    Fr out;
    mod_sub(out.v, a.v, b.v, R);
    return out;
}

Fr fr_neg(const Fr& a) { return fr_sub(fr_zero(), a); }

Fr fr_mul(const Fr& a, const Fr& b) {
    Fr out;
    mont_mul(out.v, a.v, b.v, R, R_INV);
    return out;
}

Fr fr_inv(const Fr& a) {
    Fr acc = fr_one();
    bool started = false;
    for (size_t i = 4; i-- > 0;) {
        for (int bit = 63; bit >= 0; --bit) {
            if (started) acc = fr_mul(acc, acc);
            if ((R_M2[i] >> bit) & 1) {
                acc = fr_mul(acc, a);
                started = true;
            }
        }
    }
    return acc;
}

Fr fr_pow_u64(const Fr& base, uint64_t exp) {
    Fr acc = fr_one();
    for (int bit = 63; bit >= 0; --bit) {
        acc = fr_mul(acc, acc);
        if ((exp >> bit) & 1) acc = fr_mul(acc, base);
    }
    return acc;
}

std::optional<Fr> fr_from_bytes(const uint8_t* be32) {
    Fr a;
    be_to_limbs(be32, 32, a.v);
    if (l_cmp(a.v, R) >= 0) return std::nullopt;
    mont_mul(a.v, a.v, R_R2, R, R_INV);
    return a;
}

void fr_to_bytes(const Fr& a, uint8_t* be32) {
    L<4> canon;
    L<4> one = {1, 0, 0, 0};
    mont_mul(canon, a.v, one, R, R_INV);
    limbs_to_be(canon, be32, 32);
}

Fr fr_from_digest_nonzero(const uint8_t* be32) {
    L<4> a;
    be_to_limbs(be32, 32, a);
    L<4> r_m1;
    L<4> one = {1, 0, 0, 0};
    l_sub(r_m1, R, one);
    while (l_cmp(a, r_m1) >= 0) {
        L<4> t;
        l_sub(t, a, r_m1);
        a = t;
    }
    l_add(a, a, one); // now in [1, r-1]
    Fr out{a};
    mont_mul(out.v, out.v, R_R2, R, R_INV);
    return out;
}

// ---- Fp2 ----

Fp2 fp2_zero() { return Fp2{fp_zero(), fp_zero()}; }
Fp2 fp2_one() { return Fp2{fp_one(), fp_zero()}; }
bool fp2_is_zero(const Fp2& a) { return fp_is_zero(a.c0) && fp_is_zero(a.c1); }
bool fp2_eq(const Fp2& a, const Fp2& b) { return fp_eq(a.c0, b.c0) && fp_eq(a.c1, b.c1); }
Fp2 fp2_add(const Fp2& a, const Fp2& b) { return {fp_add(a.c0, b.c0), fp_add(a.c1, b.c1)}; }
Fp2 fp2_sub(const Fp2& a, const Fp2& b) { return {fp_sub(a.c0, b.c0), fp_sub(a.c1, b.c1)}; }
Fp2 fp2_neg(const Fp2& a) { return {fp_neg(a.c0), fp_neg(a.c1)}; }
Fp2 fp2_conj(const Fp2& a) { return {a.c0, fp_neg(a.c1)}; }

Fp2 fp2_mul(const Fp2& a, const Fp2& b) {
    Fp m0 = fp_mul(a.c0, b.c0);
    Fp m1 = fp_mul(a.c1, b.c1);
    Fp m2 = fp_mul(fp_add(a.c0, a.c1), fp_add(b.c0, b.c1));
    return {fp_sub(m0, m1), fp_sub(fp_sub(m2, m0), m1)};
}

Fp2 fp2_sqr(const Fp2& a) {
    Fp t0 = fp_mul(fp_add(a.c0, a.c1), fp_sub(a.c0, a.c1));
    Fp t1 = fp_mul(a.c0, a.c1);
    return {t0, fp_add(t1, t1)};
}

Fp2 fp2_inv(const Fp2& a) {
    Fp t = fp_inv(fp_add(fp_sqr(a.c0), fp_sqr(a.c1)));
    return {fp_mul(a.c0, t), fp_neg(fp_mul(a.c1, t))};
}

Fp2 fp2_mul_fp(const Fp2& a, const Fp& s) { return {fp_mul(a.c0, s), fp_mul(a.c1, s)}; }

Fp2 fp2_mul_xi(const Fp2& a) { return {fp_sub(a.c0, a.c1), fp_add(a.c0, a.c1)}; }

Fp2 fp2_pow(const Fp2& base, const uint64_t* exp, size_t limbs) {
    Fp2 acc = fp2_one();
    bool started = false;
    for (size_t i = limbs; i-- > 0;) {
        for (int bit = 63; bit >= 0; --bit) {
            if (started) acc = fp2_sqr(acc);
            if ((exp[i] >> bit) & 1) {
                acc = fp2_mul(acc, base);
                started = true;
            }
        }
    }
    return acc;
}

std::optional<Fp2> fp2_sqrt(const Fp2& a) {
    if (fp2_is_zero(a)) return fp2_zero();
    // Works because p = 3 mod 4; verified by the final squaring check.
    Fp2 a1 = fp2_pow(a, P_M34.data(), 6);
    Fp2 x0 = fp2_mul(a1, a);
    Fp2 alpha = fp2_mul(a1, x0);
    Fp2 x;
    if (fp2_eq(alpha, fp2_neg(fp2_one()))) {
        x = Fp2{fp_neg(x0.c1), x0.c0}; // x0 * u
    } else {
        Fp2 b = fp2_pow(fp2_add(alpha, fp2_one()), P_M12.data(), 6);
        x = fp2_mul(b, x0);
    }
    if (!fp2_eq(fp2_sqr(x), a)) return std::nullopt;
    return x;
}

bool fp2_lex_larger(const Fp2& a) {
    if (!fp_is_zero(a.c1)) return fp_lex_larger(a.c1);
    return fp_lex_larger(a.c0);
}

// ---- Fp6 ----

namespace {

Fp6 fp6_zero() { return Fp6{fp2_zero(), fp2_zero(), fp2_zero()}; }
Fp6 fp6_one() { return Fp6{fp2_one(), fp2_zero(), fp2_zero()}; }
bool fp6_eq(const Fp6& a, const Fp6& b) {
    return fp2_eq(a.c0, b.c0) && fp2_eq(a.c1, b.c1) && fp2_eq(a.c2, b.c2);
}
Fp6 fp6_add(const Fp6& a, const Fp6& b) {
    return {fp2_add(a.c0, b.c0), fp2_add(a.c1, b.c1), fp2_add(a.c2, b.c2)};
}
Fp6 fp6_sub(const Fp6& a, const Fp6& b) {
    return {fp2_sub(a.c0, b.c0), fp2_sub(a.c1, b.c1), fp2_sub(a.c2, b.c2)};
}
Fp6 fp6_neg(const Fp6& a) { return {fp2_neg(a.c0), fp2_neg(a.c1), fp2_neg(a.c2)}; }

Fp6 fp6_mul(const Fp6& a, const Fp6& b) {
    Fp2 t0 = fp2_mul(a.c0, b.c0);
    Fp2 t1 = fp2_mul(a.c1, b.c1);
    Fp2 t2 = fp2_mul(a.c2, b.c2);
    Fp2 s1 = fp2_mul(fp2_add(a.c1, a.c2), fp2_add(b.c1, b.c2));
    Fp2 s2 = fp2_mul(fp2_add(a.c0, a.c1), fp2_add(b.c0, b.c1));
    Fp2 s3 = fp2_mul(fp2_add(a.c0, a.c2), fp2_add(b.c0, b.c2));
    Fp2 c0 = fp2_add(t0, fp2_mul_xi(fp2_sub(fp2_sub(s1, t1), t2)));
    Fp2 c1 = fp2_add(fp2_sub(fp2_sub(s2, t0), t1), fp2_mul_xi(t2));
    Fp2 c2 = fp2_add(fp2_sub(fp2_sub(s3, t0), t2), t1);
    return {c0, c1, c2};
}

Fp6 fp6_mul_v(const Fp6& a) { return {fp2_mul_xi(a.c2), a.c0, a.c1}; }

Fp6 fp6_inv(const Fp6& a) {
    Fp2 c0 = fp2_sub(fp2_sqr(a.c0), fp2_mul_xi(fp2_mul(a.c1, a.c2)));
    Fp2 c1 = fp2_sub(fp2_mul_xi(fp2_sqr(a.c2)), fp2_mul(a.c0, a.c1));
    Fp2 c2 = fp2_sub(fp2_sqr(a.c1), fp2_mul(a.c0, a.c2));
    Fp2 t = fp2_add(fp2_mul(a.c0, c0),
                    fp2_mul_xi(fp2_add(fp2_mul(a.c2, c1), fp2_mul(a.c1, c2))));
    Fp2 ti = fp2_inv(t);
    return {fp2_mul(c0, ti), fp2_mul(c1, ti), fp2_mul(c2, ti)};
}

} // namespace

// ---- Fp12 ----

Fp12 fp12_zero() { return Fp12{fp6_zero(), fp6_zero()}; }
Fp12 fp12_one() { return Fp12{fp6_one(), fp6_zero()}; }
bool fp12_is_one(const Fp12& a) { return fp12_eq(a, fp12_one()); }
bool fp12_eq(const Fp12& a, const Fp12& b) { return fp6_eq(a.c0, b.c0) && fp6_eq(a.c1, b.c1); }

Fp12 fp12_mul(const Fp12& a, const Fp12& b) {
    Fp6 t0 = fp6_mul(a.c0, b.c0);
    Fp6 t1 = fp6_mul(a.c1, b.c1);
    Fp6 t2 = fp6_mul(fp6_add(a.c0, a.c1), fp6_add(b.c0, b.c1));
    return {fp6_add(t0, fp6_mul_v(t1)), fp6_sub(fp6_sub(t2, t0), t1)};
}

Fp12 fp12_sqr(const Fp12& a) {
    Fp6 t = fp6_mul(a.c0, a.c1);
    Fp6 c0 = fp6_sub(fp6_sub(fp6_mul(fp6_add(a.c0, a.c1), fp6_add(a.c0, fp6_mul_v(a.c1))), t),
                     fp6_mul_v(t));
    return {c0, fp6_add(t, t)};
}

Fp12 fp12_inv(const Fp12& a) {
    Fp6 t = fp6_inv(fp6_sub(fp6_mul(a.c0, a.c0), fp6_mul_v(fp6_mul(a.c1, a.c1))));
    return {fp6_mul(a.c0, t), fp6_neg(fp6_mul(a.c1, t))};
}

Fp12 fp12_conj(const Fp12& a) { return {a.c0, fp6_neg(a.c1)}; }

namespace {

// gamma[k] = xi^(k*(p-1)/6) for k in 1..5; w^(p^k) picks up these factors.
const std::array<Fp2, 6>& frob_gamma() {
    static const std::array<Fp2, 6> g = [] {
        std::array<Fp2, 6> out;
        out[0] = fp2_one();
        Fp2 xi{fp_one(), fp_one()};
        out[1] = fp2_pow(xi, P_D6.data(), 6);
        for (int k = 2; k <= 5; ++k) out[k] = fp2_mul(out[k - 1], out[1]);
        return out;
    }();
    return g;
}

} // namespace

Fp12 fp12_frob(const Fp12& a) {
    const auto& g = frob_gamma();
    Fp12 out;
    out.c0.c0 = fp2_conj(a.c0.c0);                    // w^0
    out.c1.c0 = fp2_mul(fp2_conj(a.c1.c0), g[1]);     // w^1
    out.c0.c1 = fp2_mul(fp2_conj(a.c0.c1), g[2]);     // w^2
    out.c1.c1 = fp2_mul(fp2_conj(a.c1.c1), g[3]);     // w^3
    out.c0.c2 = fp2_mul(fp2_conj(a.c0.c2), g[4]);     // w^4
    out.c1.c2 = fp2_mul(fp2_conj(a.c1.c2), g[5]);     // w^5
    return out;
}

Fp12 fp12_pow(const Fp12& base, const uint64_t* exp, size_t limbs) {
    Fp12 acc = fp12_one();
    bool started = false;
    for (size_t i = limbs; i-- > 0;) {
        for (int bit = 63; bit >= 0; --bit) {
            if (started) acc = fp12_sqr(acc);
            if ((exp[i] >> bit) & 1) {
                acc = fp12_mul(acc, base);
                started = true;
            }
        }
    }
    return acc;
}

std::optional<Fp12> fp12_from_bytes(const uint8_t* be576) {
    Fp coeff[12];
    for (int i = 0; i < 12; ++i) {
        auto c = fp_from_bytes(be576 + 48 * i);
        if (!c) return std::nullopt;
        coeff[i] = *c;
    }
    Fp12 out;
    Fp2* slots[6] = {&out.c0.c0, &out.c0.c1, &out.c0.c2, &out.c1.c0, &out.c1.c1, &out.c1.c2};
    for (int i = 0; i < 6; ++i) *slots[i] = Fp2{coeff[2 * i], coeff[2 * i + 1]};
    return out;
}

void fp12_to_bytes(const Fp12& a, uint8_t* be576) {
    const Fp2* slots[6] = {&a.c0.c0, &a.c0.c1, &a.c0.c2, &a.c1.c0, &a.c1.c1, &a.c1.c2};
    for (int i = 0; i < 6; ++i) {
        fp_to_bytes(slots[i]->c0, be576 + 96 * i);
        fp_to_bytes(slots[i]->c1, be576 + 96 * i + 48);
    }
}

// ---- curve groups (shared Jacobian machinery) ----

namespace {

// field-op overload sets used by the templated point arithmetic
inline Fp fe_add(const Fp& a, const Fp& b) { return fp_add(a, b); }
inline Fp fe_sub(const Fp& a, const Fp& b) { return fp_sub(a, b); }
inline Fp fe_mul(const Fp& a, const Fp& b) { return fp_mul(a, b); }
inline Fp fe_sqr(const Fp& a) { return fp_sqr(a); }
inline Fp fe_neg(const Fp& a) { return fp_neg(a); }
inline Fp fe_inv(const Fp& a) { return fp_inv(a); }
inline bool fe_is_zero(const Fp& a) { return fp_is_zero(a); }
inline bool fe_eq(const Fp& a, const Fp& b) { return fp_eq(a, b); }
inline Fp fe_one(const Fp&) { return fp_one(); }
inline Fp fe_zero(const Fp&) { return fp_zero(); }

inline Fp2 fe_add(const Fp2& a, const Fp2& b) { return fp2_add(a, b); }
inline Fp2 fe_sub(const Fp2& a, const Fp2& b) { return fp2_sub(a, b); }
inline Fp2 fe_mul(const Fp2& a, const Fp2& b) { return fp2_mul(a, b); }
inline Fp2 fe_sqr(const Fp2& a) { return fp2_sqr(a); }
inline Fp2 fe_neg(const Fp2& a) { return fp2_neg(a); }
inline Fp2 fe_inv(const Fp2& a) { return fp2_inv(a); }
inline bool fe_is_zero(const Fp2& a) { return fp2_is_zero(a); }
inline bool fe_eq(const Fp2& a, const Fp2& b) { return fp2_eq(a, b); }
inline Fp2 fe_one(const Fp2&) { return fp2_one(); }
inline Fp2 fe_zero(const Fp2&) { return fp2_zero(); }

template <class F>
struct Jac {
    F x, y, z; // z == 0 encodes infinity
};

template <class F, class A>
Jac<F> to_jac(const A& a) {
    if (a.inf) {
        F zero = fe_zero(F{});
        F one = fe_one(F{});
        return {one, one, zero};
    }
    return {a.x, a.y, fe_one(a.x)};
}

template <class F>
bool jac_is_inf(const Jac<F>& p) {
    return fe_is_zero(p.z);
}

// dbl-2009-l (a = 0)
template <class F>
Jac<F> jac_dbl(const Jac<F>& p) {
    if (jac_is_inf(p) || fe_is_zero(p.y)) return {fe_one(p.x), fe_one(p.x), fe_zero(p.x)};
    F a = fe_sqr(p.x);
    F b = fe_sqr(p.y);
    F c = fe_sqr(b);
    F d = fe_sub(fe_sub(fe_sqr(fe_add(p.x, b)), a), c);
    d = fe_add(d, d);
    F e = fe_add(fe_add(a, a), a);
    F f = fe_sqr(e);
    F x3 = fe_sub(f, fe_add(d, d));
    F c8 = fe_add(c, c);
    c8 = fe_add(c8, c8);
    c8 = fe_add(c8, c8);
    F y3 = fe_sub(fe_mul(e, fe_sub(d, x3)), c8);
    F z3 = fe_mul(p.y, p.z);
    z3 = fe_add(z3, z3);
    return {x3, y3, z3};
}

// add-2007-bl with the doubling and infinity special cases folded in
template <class F>
Jac<F> jac_add(const Jac<F>& p, const Jac<F>& q) {
    if (jac_is_inf(p)) return q;
    if (jac_is_inf(q)) return p;
    F z1z1 = fe_sqr(p.z);
    F z2z2 = fe_sqr(q.z);
    F u1 = fe_mul(p.x, z2z2);
    F u2 = fe_mul(q.x, z1z1);
    F s1 = fe_mul(fe_mul(p.y, q.z), z2z2);
    F s2 = fe_mul(fe_mul(q.y, p.z), z1z1);
    if (fe_eq(u1, u2)) {
        if (fe_eq(s1, s2)) return jac_dbl(p);
        return {fe_one(p.x), fe_one(p.x), fe_zero(p.x)};
    }
    F h = fe_sub(u2, u1);
    F i = fe_add(h, h);
    i = fe_sqr(i);
    F j = fe_mul(h, i);
    F rr = fe_sub(s2, s1);
    rr = fe_add(rr, rr);
    F v = fe_mul(u1, i);
    F x3 = fe_sub(fe_sub(fe_sqr(rr), j), fe_add(v, v));
    F s1j = fe_mul(s1, j);
    F y3 = fe_sub(fe_mul(rr, fe_sub(v, x3)), fe_add(s1j, s1j));
    F z3 = fe_mul(fe_sub(fe_sub(fe_sqr(fe_add(p.z, q.z)), z1z1), z2z2), h);
    return {x3, y3, z3};
}

template <class F, class A>
A jac_to_affine(const Jac<F>& p) {
    if (jac_is_inf(p)) {
        A out;
        out.x = fe_zero(F{});
        out.y = fe_zero(F{});
        out.inf = true;
        return out;
    }
    F zi = fe_inv(p.z);
    F zi2 = fe_sqr(zi);
    A out;
    out.x = fe_mul(p.x, zi2);
    out.y = fe_mul(p.y, fe_mul(zi2, zi));
    out.inf = false;
    return out;
}

template <class F>
Jac<F> jac_mul(const Jac<F>& p, const uint64_t* exp, size_t limbs) {
    Jac<F> acc = {fe_one(p.x), fe_one(p.x), fe_zero(p.x)};
    bool started = false;
    for (size_t i = limbs; i-- > 0;) {
        for (int bit = 63; bit >= 0; --bit) {
            if (started) acc = jac_dbl(acc);
            if ((exp[i] >> bit) & 1) {
                acc = jac_add(acc, p);
                started = true;
            }
        }
    }
    return acc;
}

const Fp& g1_b() {
    static const Fp b = fp_from_u64(4);
    return b;
}

const Fp2& g2_b() {
    static const Fp2 b{fp_from_u64(4), fp_from_u64(4)};
    return b;
}

// standard compressed generator encodings
constexpr uint8_t G1_GEN_BYTES[48] = {
    0x97, 0xf1, 0xd3, 0xa7, 0x31, 0x97, 0xd7, 0x94, 0x26, 0x95, 0x63, 0x8c,
    0x4f, 0xa9, 0xac, 0x0f, 0xc3, 0x68, 0x8c, 0x4f, 0x97, 0x74, 0xb9, 0x05,
    0xa1, 0x4e, 0x3a, 0x3f, 0x17, 0x1b, 0xac, 0x58, 0x6c, 0x55, 0xe8, 0x3f,
    0xf9, 0x7a, 0x1a, 0xef, 0xfb, 0x3a, 0xf0, 0x0a, 0xdb, 0x22, 0xc6, 0xbb};
constexpr uint8_t G2_GEN_BYTES[96] = {
    0x93, 0xe0, 0x2b, 0x60, 0x52, 0x71, 0x9f, 0x60, 0x7d, 0xac, 0xd3, 0xa0,
    0x88, 0x27, 0x4f, 0x65, 0x59, 0x6b, 0xd0, 0xd0, 0x99, 0x20, 0xb6, 0x1a,
    0xb5, 0xda, 0x61, 0xbb, 0xdc, 0x7f, 0x50, 0x49, 0x33, 0x4c, 0xf1, 0x12,
    0x13, 0x94, 0x5d, 0x57, 0xe5, 0xac, 0x7d, 0x05, 0x5d, 0x04, 0x2b, 0x7e,
    0x02, 0x4a, 0xa2, 0xb2, 0xf0, 0x8f, 0x0a, 0x91, 0x26, 0x08, 0x05, 0x27,
    0x2d, 0xc5, 0x10, 0x51, 0xc6, 0xe4, 0x7a, 0xd4, 0xfa, 0x40, 0x3b, 0x02,
    0xb4, 0x51, 0x0b, 0x64, 0x7a, 0xe3, 0xd1, 0x77, 0x0b, 0xac, 0x03, 0x26,
    0xa8, 0x05, 0xbb, 0xef, 0xd4, 0x80, 0x56, 0xc8, 0xc1, 0x21, 0xbd, 0xb8};

} // namespace

// ---- G1 ----

G1Affine g1_infinity() { return {fp_zero(), fp_zero(), true}; }

bool g1_eq(const G1Affine& a, const G1Affine& b) {
    if (a.inf || b.inf) return a.inf == b.inf;
    return fp_eq(a.x, b.x) && fp_eq(a.y, b.y);
}

G1Affine g1_add(const G1Affine& a, const G1Affine& b) {
    return jac_to_affine<Fp, G1Affine>(jac_add(to_jac<Fp>(a), to_jac<Fp>(b)));
}

G1Affine g1_neg(const G1Affine& a) {
    if (a.inf) return a;
    return {a.x, fp_neg(a.y), false};
}

G1Affine g1_mul(const G1Affine& a, const Fr& k) {
    L<4> canon;
    L<4> one = {1, 0, 0, 0};
    mont_mul(canon, k.v, one, R, R_INV);
    return jac_to_affine<Fp, G1Affine>(jac_mul(to_jac<Fp>(a), canon.data(), 4));
}

bool g1_on_curve(const G1Affine& a) {
    if (a.inf) return true;
    return fp_eq(fp_sqr(a.y), fp_add(fp_mul(fp_sqr(a.x), a.x), g1_b()));
}

bool g1_in_subgroup(const G1Affine& a) {
    if (a.inf) return true;
    return jac_is_inf(jac_mul(to_jac<Fp>(a), R.data(), 4));
}

G1Affine g1_clear_cofactor(const G1Affine& a) {
    return jac_to_affine<Fp, G1Affine>(jac_mul(to_jac<Fp>(a), H1.data(), 2));
}

void g1_to_bytes(const G1Affine& a, uint8_t* out48) {
    if (a.inf) {
        std::memset(out48, 0, 48);
        out48[0] = 0xc0;
        return;
    }
    fp_to_bytes(a.x, out48);
    out48[0] |= 0x80;
    if (fp_lex_larger(a.y)) out48[0] |= 0x20;
}

std::optional<G1Affine> g1_from_bytes(const uint8_t* in48) {
    uint8_t flags = in48[0] & 0xe0;
    if (!(flags & 0x80)) return std::nullopt; // only compressed form supported
    if (flags & 0x40) {
        if (flags & 0x20) return std::nullopt;
        for (int i = 1; i < 48; ++i)
            if (in48[i]) return std::nullopt;
        if (in48[0] != 0xc0) return std::nullopt;
        return g1_infinity();
    }
    uint8_t buf[48];
    std::memcpy(buf, in48, 48);
    buf[0] &= 0x1f;
    auto x = fp_from_bytes(buf);
    if (!x) return std::nullopt;
    auto y = fp_sqrt(fp_add(fp_mul(fp_sqr(*x), *x), g1_b()));
    if (!y) return std::nullopt;
    G1Affine p{*x, *y, false};
    bool want_larger = (flags & 0x20) != 0;
    if (fp_lex_larger(p.y) != want_larger) p.y = fp_neg(p.y);
    if (!g1_in_subgroup(p)) return std::nullopt;
    return p;
}

const G1Affine& g1_generator() {
    static const G1Affine g = *g1_from_bytes(G1_GEN_BYTES);
    return g;
}

// ---- G2 ----

G2Affine g2_infinity() { return {fp2_zero(), fp2_zero(), true}; }

bool g2_eq(const G2Affine& a, const G2Affine& b) {
    if (a.inf || b.inf) return a.inf == b.inf;
    return fp2_eq(a.x, b.x) && fp2_eq(a.y, b.y);
}

G2Affine g2_add(const G2Affine& a, const G2Affine& b) {
    return jac_to_affine<Fp2, G2Affine>(jac_add(to_jac<Fp2>(a), to_jac<Fp2>(b)));
}

G2Affine g2_neg(const G2Affine& a) {
    if (a.inf) return a;
    return {a.x, fp2_neg(a.y), false};
}

G2Affine g2_mul(const G2Affine& a, const Fr& k) {
    L<4> canon;
    L<4> one = {1, 0, 0, 0};
    mont_mul(canon, k.v, one, R, R_INV);
    return jac_to_affine<Fp2, G2Affine>(jac_mul(to_jac<Fp2>(a), canon.data(), 4));
}

bool g2_on_curve(const G2Affine& a) {
    if (a.inf) return true;
    return fp2_eq(fp2_sqr(a.y), fp2_add(fp2_mul(fp2_sqr(a.x), a.x), g2_b()));
}

bool g2_in_subgroup(const G2Affine& a) {
    if (a.inf) return true;
    return jac_is_inf(jac_mul(to_jac<Fp2>(a), R.data(), 4));
}

void g2_to_bytes(const G2Affine& a, uint8_t* out96) {
    if (a.inf) {
        std::memset(out96, 0, 96);
        out96[0] = 0xc0;
        return;
    }
    fp_to_bytes(a.x.c1, out96);      // c1 first
    fp_to_bytes(a.x.c0, out96 + 48);
    out96[0] |= 0x80;
    if (fp2_lex_larger(a.y)) out96[0] |= 0x20;
}

std::optional<G2Affine> g2_from_bytes(const uint8_t* in96) {
    uint8_t flags = in96[0] & 0xe0;
    if (!(flags & 0x80)) return std::nullopt;
    if (flags & 0x40) {
        if (flags & 0x20) return std::nullopt;
        for (int i = 1; i < 96; ++i)
            if (in96[i]) return std::nullopt;
        if (in96[0] != 0xc0) return std::nullopt;
        return g2_infinity();
    }
    uint8_t buf[48];
    std::memcpy(buf, in96, 48);
    buf[0] &= 0x1f;
    auto xc1 = fp_from_bytes(buf);
    if (!xc1) return std::nullopt;
    auto xc0 = fp_from_bytes(in96 + 48);
    if (!xc0) return std::nullopt;
    Fp2 x{*xc0, *xc1};
    auto y = fp2_sqrt(fp2_add(fp2_mul(fp2_sqr(x), x), g2_b()));
    if (!y) return std::nullopt;
    G2Affine p{x, *y, false};
    bool want_larger = (flags & 0x20) != 0;
    if (fp2_lex_larger(p.y) != want_larger) p.y = fp2_neg(p.y);
    if (!g2_in_subgroup(p)) return std::nullopt;
    return p;
}

const G2Affine& g2_generator() {
    static const G2Affine g = *g2_from_bytes(G2_GEN_BYTES);
    return g;
}

// ---- pairing ----

namespace {

// The point P in G1 is mapped onto the twist curve over Fp12 as
// (x*w^2, y*w^3); the tangent/chord line through T (and Q) evaluated there
// is sparse: L0 + L2*w^2 + L3*w^3 with L0, L2, L3 in Fp2.
Fp12 line_eval(const Fp2& lambda, const Fp2& x1, const Fp2& y1, const G1Affine& p) {
    Fp2 l0 = fp2_sub(fp2_mul(lambda, x1), y1);
    Fp2 l2 = fp2_neg(fp2_mul_fp(lambda, p.x));
    Fp2 l3{p.y, fp_zero()};
    Fp12 out = fp12_zero();
    out.c0.c0 = l0;
    out.c0.c1 = l2;
    out.c1.c1 = l3;
    return out;
}

Fp12 miller_loop(const G1Affine& p, const G2Affine& q) {
    Fp2 xt = q.x, yt = q.y;
    Fp12 f = fp12_one();
    for (int i = 62; i >= 0; --i) {
        f = fp12_sqr(f);
        // tangent at T
        Fp2 num = fp2_sqr(xt);
        num = fp2_add(fp2_add(num, num), num);
        Fp2 lambda = fp2_mul(num, fp2_inv(fp2_add(yt, yt)));
        f = fp12_mul(f, line_eval(lambda, xt, yt, p));
        Fp2 x3 = fp2_sub(fp2_sqr(lambda), fp2_add(xt, xt));
        Fp2 y3 = fp2_sub(fp2_mul(lambda, fp2_sub(xt, x3)), yt);
        xt = x3;
        yt = y3;
        if ((Z_ABS >> i) & 1) {
            // chord through T and Q
            Fp2 lam2 = fp2_mul(fp2_sub(yt, q.y), fp2_inv(fp2_sub(xt, q.x)));
            f = fp12_mul(f, line_eval(lam2, xt, yt, p));
            Fp2 x4 = fp2_sub(fp2_sub(fp2_sqr(lam2), xt), q.x);
            Fp2 y4 = fp2_sub(fp2_mul(lam2, fp2_sub(xt, x4)), yt);
            xt = x4;
            yt = y4;
        }
    }
    return fp12_conj(f); // the BLS parameter z is negative
}

Fp12 pow_z_abs(const Fp12& x) {
    Fp12 acc = fp12_one();
    bool started = false;
    for (int bit = 63; bit >= 0; --bit) {
        if (started) acc = fp12_sqr(acc);
        if ((Z_ABS >> bit) & 1) {
            acc = fp12_mul(acc, x);
            started = true;
        }
    }
    return acc;
}

Fp12 final_exp(const Fp12& f) {
    // easy part: f^((p^6 - 1)(p^2 + 1))
    Fp12 t = fp12_mul(fp12_conj(f), fp12_inv(f));
    t = fp12_mul(fp12_frob(fp12_frob(t)), t);
    // After the easy part t is unitary, so conjugation inverts and x^z is
    // conj(x^|z|).  Hard part exponent: (z-1)^2 (z+p) (z^2+p^2-1) + 3,
    // which equals 3(p^4 - p^2 + 1)/r.
    auto pz = [](const Fp12& x) { return fp12_conj(pow_z_abs(x)); };
    Fp12 a = fp12_mul(pz(t), fp12_conj(t));              // t^(z-1)
    a = fp12_mul(pz(a), fp12_conj(a));                   // t^((z-1)^2)
    a = fp12_mul(pz(a), fp12_frob(a));                   // ... ^(z+p)
    Fp12 b = fp12_mul(pz(pz(a)), fp12_frob(fp12_frob(a)));
    a = fp12_mul(b, fp12_conj(a));                       // ... ^(z^2+p^2-1)
    return fp12_mul(a, fp12_mul(fp12_sqr(t), t));        // * t^3
}

} // namespace

Fp12 pairing(const G1Affine& p, const G2Affine& q) {
    if (p.inf || q.inf) return fp12_one();
    return final_exp(miller_loop(p, q));
}

const Fp12& gt_generator() {
    static const Fp12 g = pairing(g1_generator(), g2_generator());
    return g;
}

} // namespace xdpre::bls
