#include "xdpre/bls12381.hpp"

#include <doctest.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

using namespace xdpre::bls;

namespace {

std::vector<uint8_t> unhex(const std::string& s) {
    std::vector<uint8_t> out(s.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = uint8_t(std::stoul(s.substr(2 * i, 2), nullptr, 16));
    return out;
}

std::string hex(const uint8_t* p, size_t n) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (size_t i = 0; i < n; ++i) {
        out += digits[p[i] >> 4];
        out += digits[p[i] & 15];
    }
    return out;
}

std::string fp_hex(const Fp& a) {
    uint8_t buf[48];
    fp_to_bytes(a, buf);
    return hex(buf, 48);
}

// group order r, little-endian 64-bit limbs
constexpr std::array<uint64_t, 4> kOrder{0xffffffff00000001ull, 0x53bda402fffe5bfeull,
                                         0x3339d80809a1d805ull, 0x73eda753299d7d48ull};

}  // namespace

TEST_CASE("fp arithmetic against independently computed values") {
    // 7^{-1} mod p
    CHECK(fp_hex(fp_inv(fp_from_u64(7))) ==
          "03b7028f2cc920f17871aa3e9be63d43577ec1a5475c273fea2b8bcdda1947bc"
          "0461b6db3de76db6d16d924924923cf4");
    CHECK(fp_eq(fp_mul(fp_inv(fp_from_u64(7)), fp_from_u64(7)), fp_one()));

    CHECK(fp_is_zero(fp_add(fp_from_u64(5), fp_neg(fp_from_u64(5)))));
    CHECK(fp_eq(fp_sub(fp_from_u64(11), fp_from_u64(4)), fp_from_u64(7)));
    CHECK(fp_eq(fp_sqr(fp_from_u64(9)), fp_from_u64(81)));

    uint64_t three = 3;
    CHECK(fp_eq(fp_pow(fp_from_u64(5), &three, 1), fp_from_u64(125)));
}

TEST_CASE("fp square roots") {
    // sqrt(10) mod p, smaller root; 10 is a residue, 2/3/5 are not
    auto s = fp_sqrt(fp_from_u64(10));
    REQUIRE(s.has_value());
    CHECK(fp_eq(fp_sqr(*s), fp_from_u64(10)));
    Fp canon = fp_lex_larger(*s) ? fp_neg(*s) : *s;
    CHECK(fp_hex(canon) ==
          "02782469829c84f8970eb3cb2b699ed6886076ad6283d5f2b25133269c0244c6"
          "8ebd66819ae0540ed5329791c9d9696a");
    CHECK_FALSE(fp_sqrt(fp_from_u64(2)).has_value());
    CHECK_FALSE(fp_sqrt(fp_from_u64(5)).has_value());
}

TEST_CASE("fp byte codec rejects non-canonical input") {
    uint8_t buf[48];
    std::memset(buf, 0xff, sizeof buf);
    CHECK_FALSE(fp_from_bytes(buf).has_value());
    CHECK_FALSE(fp_is_zero(fp_from_bytes_mod(buf)));
    fp_to_bytes(fp_from_u64(300), buf);
    CHECK(hex(buf, 48).substr(92) == "012c");
    auto back = fp_from_bytes(buf);
    REQUIRE(back.has_value());
    CHECK(fp_eq(*back, fp_from_u64(300)));
}

TEST_CASE("fr arithmetic against independently computed values") {
    uint8_t buf[32];
    fr_to_bytes(fr_inv(fr_from_u64(7)), buf);
    CHECK(hex(buf, 32) ==
          "211f5460e751918257c7624b7077624aaa362edc49241a48db6db6db24924925");
    fr_to_bytes(fr_pow_u64(fr_from_u64(7), 1000000007ull), buf);
    CHECK(hex(buf, 32) ==
          "0e2f3fb93b3ebfd605d161a107717bda577a85441a6a5c7773e84c66be0d8033");
    CHECK(fr_eq(fr_mul(fr_from_u64(6), fr_inv(fr_from_u64(3))), fr_from_u64(2)));
    CHECK(fr_is_zero(fr_add(fr_from_u64(4), fr_neg(fr_from_u64(4)))));
    CHECK(fr_eq(fr_sub(fr_zero(), fr_one()), fr_neg(fr_one())));

    std::memset(buf, 0xff, sizeof buf);
    CHECK_FALSE(fr_from_bytes(buf).has_value());
    CHECK_FALSE(fr_is_zero(fr_from_digest_nonzero(buf)));
    std::memset(buf, 0, sizeof buf);
    CHECK_FALSE(fr_is_zero(fr_from_digest_nonzero(buf)));
}

TEST_CASE("tower arithmetic identities") {
    Fp2 a{fp_from_u64(3), fp_from_u64(5)};
    CHECK(fp2_eq(fp2_mul(a, fp2_inv(a)), fp2_one()));
    // (3+5u)(3-5u) = 9+25 = 34
    Fp2 n = fp2_mul(a, fp2_conj(a));
    CHECK(fp_eq(n.c0, fp_from_u64(34)));
    CHECK(fp_is_zero(n.c1));
    CHECK(fp2_eq(fp2_sqr(a), fp2_mul(a, a)));
    // xi = 1+u: (3+5u)(1+u) = -2+8u
    Fp2 x = fp2_mul_xi(a);
    CHECK(fp_eq(x.c0, fp_neg(fp_from_u64(2))));
    CHECK(fp_eq(x.c1, fp_from_u64(8)));
    auto s = fp2_sqrt(fp2_sqr(a));
    REQUIRE(s.has_value());
    CHECK(fp2_eq(fp2_sqr(*s), fp2_sqr(a)));

    Fp12 g = gt_generator();
    CHECK(fp12_eq(fp12_mul(g, fp12_inv(g)), fp12_one()));
    CHECK(fp12_eq(fp12_sqr(g), fp12_mul(g, g)));
    // Frobenius has order 12 and fixes prime-field constants
    Fp12 f = g;
    for (int i = 0; i < 12; ++i) f = fp12_frob(f);
    CHECK(fp12_eq(f, g));
    Fp12 two = fp12_one();
    two.c0.c0.c0 = fp_from_u64(2);
    CHECK(fp12_eq(fp12_frob(two), two));
}

TEST_CASE("generators match the standard encodings") {
    uint8_t b1[48], b2[96];
    g1_to_bytes(g1_generator(), b1);
    CHECK(hex(b1, 48) ==
          "97f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac58"
          "6c55e83ff97a1aeffb3af00adb22c6bb");
    g2_to_bytes(g2_generator(), b2);
    CHECK(hex(b2, 96) ==
          "93e02b6052719f607dacd3a088274f65596bd0d09920b61ab5da61bbdc7f5049"
          "334cf11213945d57e5ac7d055d042b7e024aa2b2f08f0a91260805272dc51051"
          "c6e47ad4fa403b02b4510b647ae3d1770bac0326a805bbefd48056c8c121bdb8");
    g1_to_bytes(g1_infinity(), b1);
    CHECK(hex(b1, 48) == "c0" + std::string(94, '0'));
    CHECK(g1_on_curve(g1_generator()));
    CHECK(g1_in_subgroup(g1_generator()));
    CHECK(g2_on_curve(g2_generator()));
    CHECK(g2_in_subgroup(g2_generator()));
}

TEST_CASE("scalar multiplication against an independent group law") {
    G1Affine p = g1_mul(g1_generator(), fr_from_u64(12345));
    CHECK(fp_hex(p.x) ==
          "0530c1bdc4cd6b1408be0933c4a41ac3513350eef36850b804708e1f338932ce"
          "01b655a163344a4500b281c8750c461f");
    CHECK(fp_hex(p.y) ==
          "0038e76f31b5aef9d7c8f1616d2446fb1f0380aca586b9268a115e8d191c5e47"
          "ed04c4b77b72394740025706845c9cb7");

    G2Affine q = g2_mul(g2_generator(), fr_from_u64(12345));
    CHECK(fp_hex(q.x.c0) ==
          "037ece3ecc512226a1e56fbe0b33aab2080ab467d14aadeff5dcd8adc6613b92"
          "6bc97601a4a1f1287793757b10d68a93");
    CHECK(fp_hex(q.x.c1) ==
          "049d5b3d40fe475b145eebf53d97981bde5a64dea2964807f82561e709e804fe"
          "e3ecfb5356631b2dedbe82d3d1dad0bb");
    CHECK(fp_hex(q.y.c0) ==
          "049ec434fee230231794c2d0e669746d30369264f8fc112901cf11cbe1de802f"
          "369ef761ebe1a045caba36891aab6e1c");
    CHECK(fp_hex(q.y.c1) ==
          "02309a7a5c05622be1dbfbd4cd08505f3337a43e4feb76ac0fec48e015d9c5a4"
          "dc1eedf095fee3bdc4b3732c4cfd1b5b");
}

TEST_CASE("group law edge cases") {
    G1Affine g = g1_generator();
    CHECK(g1_eq(g1_add(g, g1_infinity()), g));
    CHECK(g1_eq(g1_add(g1_infinity(), g), g));
    CHECK(g1_add(g, g1_neg(g)).inf);
    CHECK(g1_eq(g1_add(g, g), g1_mul(g, fr_from_u64(2))));
    CHECK(g1_mul(g, fr_zero()).inf);
    // order annihilates
    Fr r_minus_1 = fr_neg(fr_one());
    CHECK(g1_add(g1_mul(g, r_minus_1), g).inf);
    G2Affine h = g2_generator();
    CHECK(g2_add(g2_mul(h, r_minus_1), h).inf);
    CHECK(g2_eq(g2_add(h, h), g2_mul(h, fr_from_u64(2))));
}

TEST_CASE("point decoding validates curve and subgroup membership") {
    uint8_t buf[96];
    g1_to_bytes(g1_mul(g1_generator(), fr_from_u64(99)), buf);
    auto p = g1_from_bytes(buf);
    REQUIRE(p.has_value());
    CHECK(g1_eq(*p, g1_mul(g1_generator(), fr_from_u64(99))));
    // flip the sort bit: same x, other root
    buf[0] ^= 0x20;
    auto flipped = g1_from_bytes(buf);
    REQUIRE(flipped.has_value());
    CHECK(g1_eq(*flipped, g1_neg(*p)));
    // clear the compression bit
    buf[0] &= 0x7f;
    CHECK_FALSE(g1_from_bytes(buf).has_value());
    // x beyond the modulus
    std::memset(buf, 0xff, 48);
    buf[0] = 0x9f;
    CHECK_FALSE(g1_from_bytes(buf).has_value());
    // infinity with nonzero payload
    std::memset(buf, 0, 48);
    buf[0] = 0xc0;
    buf[47] = 1;
    CHECK_FALSE(g1_from_bytes(buf).has_value());
    // on the curve but outside the r-torsion: search a small x
    bool found_torsion_reject = false;
    for (uint64_t x = 1; x < 40 && !found_torsion_reject; ++x) {
        auto y2 = fp_add(fp_mul(fp_sqr(fp_from_u64(x)), fp_from_u64(x)), fp_from_u64(4));
        auto y = fp_sqrt(y2);
        if (!y) continue;
        G1Affine cand{fp_from_u64(x), *y, false};
        if (!g1_in_subgroup(cand)) {
            g1_to_bytes(cand, buf);
            CHECK_FALSE(g1_from_bytes(buf).has_value());
            found_torsion_reject = true;
        }
    }
    CHECK(found_torsion_reject);

    g2_to_bytes(g2_mul(g2_generator(), fr_from_u64(7)), buf);
    auto q = g2_from_bytes(buf);
    REQUIRE(q.has_value());
    CHECK(g2_eq(*q, g2_mul(g2_generator(), fr_from_u64(7))));
    buf[0] &= 0x7f;
    CHECK_FALSE(g2_from_bytes(buf).has_value());
}

TEST_CASE("pairing bilinearity and structure") {
    const G1Affine& g1 = g1_generator();
    const G2Affine& g2 = g2_generator();
    Fp12 e = pairing(g1, g2);
    CHECK(fp12_eq(e, gt_generator()));
    CHECK_FALSE(fp12_is_one(e));

    // e(aP, bQ) = e(P, Q)^{ab}; ab mod r computed independently
    Fr a = fr_from_u64(0xdeadbeef12345678ull);
    Fr b = fr_from_u64(0xcafef00dabcdef99ull);
    Fp12 lhs = pairing(g1_mul(g1, a), g2_mul(g2, b));
    auto ab = unhex("00000000000000000000000000000000b092d9dadcd55f725a7bbca42419b5b8");
    uint64_t limbs[4];
    for (int i = 0; i < 4; ++i) {
        limbs[i] = 0;
        for (int j = 0; j < 8; ++j) limbs[i] = (limbs[i] << 8) | ab[24 - 8 * i + j];
    }
    CHECK(fp12_eq(lhs, fp12_pow(e, limbs, 4)));

    // both arguments move the same way
    CHECK(fp12_eq(pairing(g1_mul(g1, a), g2), pairing(g1, g2_mul(g2, a))));
    // inversion in either slot
    CHECK(fp12_eq(pairing(g1_neg(g1), g2), fp12_inv(e)));
    CHECK(fp12_eq(pairing(g1, g2_neg(g2)), fp12_inv(e)));
    // identity slots
    CHECK(fp12_is_one(pairing(g1_infinity(), g2)));
    CHECK(fp12_is_one(pairing(g1, g2_infinity())));

    // outputs live in the order-r cyclotomic subgroup: t^r = 1, conj = inv
    Fp12 t = pairing(g1_mul(g1, fr_from_u64(31337)), g2_mul(g2, fr_from_u64(271828)));
    CHECK(fp12_is_one(fp12_pow(t, kOrder.data(), kOrder.size())));
    CHECK(fp12_eq(fp12_conj(t), fp12_inv(t)));
}

TEST_CASE("gt byte codec round-trips and rejects junk") {
    uint8_t buf[576];
    Fp12 t = pairing(g1_mul(g1_generator(), fr_from_u64(5)), g2_generator());
    fp12_to_bytes(t, buf);
    auto back = fp12_from_bytes(buf);
    REQUIRE(back.has_value());
    CHECK(fp12_eq(*back, t));
    std::memset(buf, 0xff, 48);
    CHECK_FALSE(fp12_from_bytes(buf).has_value());
}
