#include "xdpre/errors.hpp"
#include "xdpre/scheme.hpp"

#include "support.hpp"

#include <doctest.h>

#include <set>
#include <string>

using namespace xdpre;
using namespace xdpre::scheme;
using groups::Backend;

TEST_CASE("setup fixes the published values from the master scalars") {
    auto dbg = Backend::debug_backend();
    Rng rng(42);
    // m = 3, n = 7: h = g^7 on both sides, egg_m = gt^3
    auto su = setup_from_secrets(dbg, {"Doctor", "Professor", "Researcher"},
                                 dbg.scalar_from_u64(3), dbg.scalar_from_u64(7), rng);
    CHECK(su.pk.w.size() == 3);
    CHECK(su.pk.h.g1_part.debug_exponent() == 7);
    CHECK(su.pk.h.g2_part.debug_exponent() == 7);
    CHECK(su.pk.egg_m.debug_exponent() == 3);
    CHECK(pair(su.pk.g.g1_part, su.pk.h.g2_part) == pair(su.pk.g.g1_part, su.pk.g.g2_part).pow(su.msk.n));
    CHECK(consistent_dual(dbg, su.pk.h));
    for (const auto& [name, w] : su.pk.w) CHECK(consistent_dual(dbg, w));

    CHECK_THROWS_AS((void)setup(dbg, {"A", "A"}, rng), DuplicateAttribute);
    CHECK_THROWS_AS((void)setup(dbg, {"b"}, rng), ReservedAttribute);
    CHECK_THROWS_AS((void)setup(dbg, {"bad attr"}, rng), InvalidParameter);
    CHECK(setup(dbg, {}, rng).pk.w.empty());
}

TEST_CASE("keygen splits the master secret as (m + k) / n") {
    auto dbg = Backend::debug_backend();
    Rng rng(42);
    auto su = setup_from_secrets(dbg, {"Doctor"}, dbg.scalar_from_u64(3),
                                 dbg.scalar_from_u64(7), rng);
    // k = 5: sk1 = g2^{(3+5)/7}; (3+5)*7^{-1} = 8*29 = 232 = 30 mod 101
    auto ruk = keygen_from_secrets(su.msk, su.pk, {"Doctor"}, dbg.scalar_from_u64(5), rng);
    CHECK(ruk.key.sk1.debug_exponent() == 30);
    CHECK(ruk.key.sk2.has_value());
    CHECK(ruk.key.sk3.size() == 1);
    CHECK(ruk.k.debug_value() == 5);
    CHECK_THROWS_AS((void)keygen(su.msk, su.pk, {"Student"}, rng), UnknownAttribute);
    auto none = keygen(su.msk, su.pk, {}, rng);
    CHECK(none.sk3.empty());
    CHECK(none.sk2.has_value());
}

TEST_CASE("encrypt places shares in the exponent") {
    auto dbg = Backend::debug_backend();
    Rng rng(42);
    auto su = setup_from_secrets(dbg, {"Doctor"}, dbg.scalar_from_u64(3),
                                 dbg.scalar_from_u64(7), rng);
    auto key = random_symmetric_key(dbg, rng);
    auto matrix = policy::build_matrix(dbg, policy::parse_policy("Doctor"));
    // u = (7, 5): leaf share 17, so B = g1^17, C = B^{p_Doctor}
    auto shares = policy::generate_shares_from(matrix, {dbg.scalar_from_u64(7), dbg.scalar_from_u64(5)});
    auto ct = encrypt_from_shares(su.pk, key, matrix, shares);
    CHECK(ct.leaves.at(1).first.debug_exponent() == 17);
    size_t p_doc = su.pk.w.at("Doctor").g1_part.debug_exponent();
    CHECK(ct.leaves.at(1).second.debug_exponent() == 17 * p_doc % 101);
    CHECK(ct.a2.debug_exponent() == 7 * 7 % 101);
    CHECK(ct.a1 == key.value * su.pk.egg_m.pow(dbg.scalar_from_u64(7)));
}

TEST_CASE("decrypt recovers the key and traces the leaf identity") {
    auto dbg = Backend::debug_backend();
    Rng rng(42);
    auto su = setup_from_secrets(dbg, {"Doctor"}, dbg.scalar_from_u64(3),
                                 dbg.scalar_from_u64(7), rng);
    auto ruk = keygen_from_secrets(su.msk, su.pk, {"Doctor"}, dbg.scalar_from_u64(5), rng);
    auto key = random_symmetric_key(dbg, rng);
    auto matrix = policy::build_matrix(dbg, policy::parse_policy("Doctor"));
    auto shares = policy::generate_shares_from(matrix, {dbg.scalar_from_u64(7), dbg.scalar_from_u64(5)});
    auto ct = encrypt_from_shares(su.pk, key, matrix, shares);
    CHECK(decrypt(su.pk, ruk.key, ct) == key);
    // protection row: F_b = e(B_b, sk2b) / e(C_b, sk2a) has exponent k * v_b
    auto f = pair(ct.protection.first, ruk.key.sk2->second) /
             pair(ct.protection.second, ruk.key.sk2->first);
    CHECK(f.debug_exponent() == 5 * 12 % 101);
    // denominator e(A2, SK1) has exponent nv * (m+k)/n = v(m+k)
    CHECK(pair(ct.a2, ruk.key.sk1).debug_exponent() == 7 * (3 + 5) % 101);
}

TEST_CASE("decrypt failure modes") {
    auto dbg = Backend::debug_backend();
    Rng rng(42);
    auto su = setup(dbg, {"Doctor", "Professor"}, rng);
    auto usk = keygen(su.msk, su.pk, {"Doctor"}, rng);
    auto key = random_symmetric_key(dbg, rng);
    auto ct = encrypt(su.pk, policy::parse_policy("Doctor"), key, rng);
    CHECK(decrypt(su.pk, usk, ct) == key);
    auto stripped = usk;
    stripped.sk2.reset();
    CHECK_THROWS_AS((void)decrypt(su.pk, stripped, ct), MissingProtectionKey);
    auto ct_and = encrypt(su.pk, policy::parse_policy("(Doctor AND Professor)"), key, rng);
    CHECK_THROWS_AS((void)decrypt(su.pk, usk, ct_and), PolicyNotSatisfied);
    auto broken = ct;
    broken.leaves.erase(1);
    CHECK_THROWS_AS((void)decrypt(su.pk, usk, broken), MalformedCiphertext);
}

TEST_CASE("encryption re-randomizes") {
    // a large debug modulus so 100 draws of v collide with negligible odds
    auto dbg = Backend::debug_backend(1000003);
    Rng rng(3);
    auto su = setup(dbg, {"Doctor"}, rng);
    auto key = random_symmetric_key(dbg, rng);
    auto pol = policy::parse_policy("Doctor");
    std::set<Bytes> seen;
    for (int i = 0; i < 100; ++i) {
        auto ct = encrypt(su.pk, pol, key, rng);
        seen.insert(serialize(ct.a2));
    }
    CHECK(seen.size() == 100);
}

TEST_CASE("same-domain round-trip iff the attributes satisfy the policy") {
    for (auto backend : {Backend::debug_backend(), Backend::curve_backend()}) {
        Rng rng(777);
        size_t cases = backend.id() == groups::BackendId::debug ? 40 : 8;
        for (size_t i = 0; i < cases; ++i) {
            auto tree = testsupport::random_policy(rng);
            auto su = setup(backend, testsupport::attribute_pool(), rng);
            auto attrs = testsupport::random_subset(rng);
            auto usk = keygen(su.msk, su.pk, attrs, rng);
            auto key = random_symmetric_key(backend, rng);
            auto ct = encrypt(su.pk, tree, key, rng);
            if (testsupport::tree_satisfied(tree, attrs)) {
                CHECK(decrypt(su.pk, usk, ct) == key);
            } else {
                CHECK_THROWS_AS((void)decrypt(su.pk, usk, ct), PolicyNotSatisfied);
            }
        }
    }
}

TEST_CASE("mixed keys never decrypt") {
    auto dbg = Backend::debug_backend();
    Rng rng(99);
    auto su = setup(dbg, {"Doctor", "Professor"}, rng);
    auto u1 = keygen(su.msk, su.pk, {"Doctor"}, rng);
    auto u2 = keygen(su.msk, su.pk, {"Professor"}, rng);
    auto key = random_symmetric_key(dbg, rng);
    auto ct = encrypt(su.pk, policy::parse_policy("(Doctor AND Professor)"), key, rng);
    // graft u2's Professor entry onto u1
    auto hybrid = u1;
    hybrid.attrs.insert("Professor");
    hybrid.sk3.insert(*u2.sk3.find("Professor"));
    bool leaked = false;
    try {
        leaked = decrypt(su.pk, hybrid, ct) == key;
    } catch (const Error&) {
    }
    CHECK_FALSE(leaked);
    // grafting the protection entry does not help either
    auto hybrid2 = hybrid;
    hybrid2.sk2 = u2.sk2;
    bool leaked2 = false;
    try {
        leaked2 = decrypt(su.pk, hybrid2, ct) == key;
    } catch (const Error&) {
    }
    CHECK_FALSE(leaked2);
}

TEST_CASE("rekeygen checks the registration and keeps the scalars") {
    auto dbg = Backend::debug_backend();
    Rng rng(42);
    auto su = setup_from_secrets(dbg, {"Doctor"}, dbg.scalar_from_u64(3),
                                 dbg.scalar_from_u64(7), rng);
    auto ruk = keygen_from_secrets(su.msk, su.pk, {"Doctor"}, dbg.scalar_from_u64(5), rng);
    auto target = dbg.dual_generator().pow(dbg.scalar_from_u64(9));
    // alpha = 4: rk1 = g1^4 * target1 = g1^13; t = 6: rk3 = g1^{k_Doctor * 6}
    auto rk = rekeygen_from_secrets(ruk, target, su.pk, dbg.scalar_from_u64(4),
                                    dbg.scalar_from_u64(2), dbg.scalar_from_u64(6));
    CHECK(rk.rk1.debug_exponent() == 13);
    CHECK(rk.rk3.size() == 1);
    CHECK(rk.rk3.at("Doctor").debug_exponent() ==
          ruk.k_attr.at("Doctor").debug_value() * 6 % 101);
    groups::DualElem bogus{dbg.g1().pow(dbg.scalar_from_u64(9)),
                           dbg.g2().pow(dbg.scalar_from_u64(8))};
    CHECK_THROWS_AS((void)rekeygen(ruk, bogus, su.pk, rng), TargetKeyNotDual);
}

TEST_CASE("legacy re-encryption is structural only") {
    auto dbg = Backend::debug_backend();
    Rng rng(42);
    auto su = setup(dbg, {"Doctor", "Professor", "Researcher"}, rng);
    auto ruk = keygen_retained(su.msk, su.pk, {"Doctor"}, rng);
    auto key = random_symmetric_key(dbg, rng);
    auto ct = encrypt(su.pk, policy::parse_policy("Doctor"), key, rng);
    auto target = dbg.dual_generator().pow(dbg.scalar_from_u64(9));
    auto rk = rekeygen(ruk, target, su.pk, rng);
    auto pol2 = policy::parse_policy("(Professor OR Researcher)");
    auto rct = reencrypt_legacy(su.pk, rk, ct, pol2, rng);
    CHECK(rct.mode == ReEncMode::legacy);
    CHECK(rct.matrix.rho[0] == "b");
    // per-row identity: e(B'_i, g2) * e(H(rho'(i)), C'_i) = gt^{v'_i}
    auto vb = pair(rct.protection.first, dbg.g2()) *
              pair(dbg.hash_to_g1(to_bytes("b")), rct.protection.second);
    auto v1 = pair(rct.leaves.at(1).first, dbg.g2()) *
              pair(dbg.hash_to_g1(to_bytes("Professor")), rct.leaves.at(1).second);
    // rows 0,1 of the OR matrix recombine as 2*row0 - row1
    auto vp = rct.a2p.debug_exponent();
    CHECK((2 * vb.debug_exponent() + 2 * 101 - v1.debug_exponent()) % 101 == vp);
    auto cdk = issue_crossdomain_key(dbg, dbg.scalar_from_u64(9), {"Professor"});
    CHECK_THROWS_AS((void)decrypt_reencrypted(cdk, rct), UnsupportedMode);
    // deterministic under a fixed seed
    Rng r1(5), r2(5);
    auto a = reencrypt_legacy(su.pk, rk, ct, pol2, r1);
    auto b = reencrypt_legacy(su.pk, rk, ct, pol2, r2);
    CHECK(serialize(a.a1p) == serialize(b.a1p));
    CHECK(serialize(a.a2p) == serialize(b.a2p));
}

TEST_CASE("corrected re-encryption round-trips cross-domain") {
    auto dbg = Backend::debug_backend();
    Rng rng(42);
    auto su = setup_from_secrets(dbg, {"Doctor", "Professor"}, dbg.scalar_from_u64(3),
                                 dbg.scalar_from_u64(7), rng);
    auto key = random_symmetric_key(dbg, rng);
    auto ct = encrypt(su.pk, policy::parse_policy("Doctor"), key, rng);
    auto target = dbg.dual_generator().pow(dbg.scalar_from_u64(9));
    auto pol2 = policy::parse_policy("Professor");
    // v' = 4: A1p = K * e(g1, pk')^{v'} = K * gt^{36}
    auto rct = reencrypt_corrected_from_secrets(su.msk, su.pk, target.g2_part, ct, pol2,
                                                dbg.scalar_from_u64(4), rng);
    CHECK((rct.a1p / key.value).debug_exponent() == 36);
    auto cdk = issue_crossdomain_key(dbg, dbg.scalar_from_u64(9), {"Professor"});
    CHECK(decrypt_reencrypted(cdk, rct) == key);
    // cdk identity: e(D_a, g2) = e(H(a), K0)
    CHECK(pair(cdk.d.at("Professor"), dbg.g2()) ==
          pair(dbg.hash_to_g1(to_bytes("Professor")), cdk.k0));
    CHECK(pair(cdk.db, dbg.g2()) == pair(dbg.hash_to_g1(to_bytes("b")), cdk.k0));

    auto wrong_beta = issue_crossdomain_key(dbg, dbg.scalar_from_u64(10), {"Professor"});
    CHECK_FALSE(decrypt_reencrypted(wrong_beta, rct) == key);
    auto missing = issue_crossdomain_key(dbg, dbg.scalar_from_u64(9), {"Student"});
    CHECK_THROWS_AS((void)decrypt_reencrypted(missing, rct), PolicyNotSatisfied);

    auto other = setup(dbg, {"Doctor"}, rng);
    CHECK_THROWS_AS((void)reencrypt_corrected(other.msk, su.pk, target.g2_part, ct, pol2, rng),
                    KeyMismatch);
    CHECK_THROWS_AS(
        (void)reencrypt_corrected(su.msk, su.pk, target.g2_part, ct,
                                  policy::parse_policy("Plumber"), rng),
        UnknownAttribute);
}

TEST_CASE("mixed cross-domain keys fail") {
    auto dbg = Backend::debug_backend();
    Rng rng(17);
    auto su = setup(dbg, {"Doctor", "Professor"}, rng);
    auto key = random_symmetric_key(dbg, rng);
    auto ct = encrypt(su.pk, policy::parse_policy("Doctor"), key, rng);
    auto beta1 = dbg.scalar_from_u64(9);
    auto beta2 = dbg.scalar_from_u64(23);
    auto pol2 = policy::parse_policy("(Doctor AND Professor)");
    auto rct = reencrypt_corrected(su.msk, su.pk, dbg.dual_generator().pow(beta1).g2_part,
                                   ct, pol2, rng);
    auto c1 = issue_crossdomain_key(dbg, beta1, {"Doctor"});
    auto c2 = issue_crossdomain_key(dbg, beta2, {"Professor"});
    // splice c2's entry for the attribute c1 lacks
    auto hybrid = c1;
    hybrid.attrs.insert("Professor");
    hybrid.d.insert(*c2.d.find("Professor"));
    bool leaked = false;
    try {
        leaked = decrypt_reencrypted(hybrid, rct) == key;
    } catch (const Error&) {
    }
    CHECK_FALSE(leaked);
}

TEST_CASE("kem dem seal and open") {
    auto dbg = Backend::debug_backend();
    Rng rng(1);
    auto key = random_symmetric_key(dbg, rng);
    auto bk = kdf(key);
    auto msg = to_bytes("OISP Symposium");
    auto sealed = dem_seal(bk, msg);
    CHECK(dem_open(bk, sealed) == msg);
    CHECK(dem_open(bk, dem_seal(bk, {})).empty());
    auto tampered = sealed;
    tampered[0] ^= 1;
    CHECK_THROWS_AS((void)dem_open(bk, tampered), IntegrityError);
    auto truncated = sealed;
    truncated.resize(10);
    CHECK_THROWS_AS((void)dem_open(bk, truncated), IntegrityError);
    auto key2 = random_symmetric_key(dbg, rng);
    CHECK_THROWS_AS((void)dem_open(kdf(key2), sealed), IntegrityError);
}

TEST_CASE("curve backend runs the full pipeline") {
    auto cur = Backend::curve_backend();
    Rng rng(7);
    auto su = setup(cur, {"Doctor", "Professor"}, rng);
    auto ruk = keygen_retained(su.msk, su.pk, {"Doctor", "Professor"}, rng);
    auto key = random_symmetric_key(cur, rng);
    auto ct = encrypt(su.pk, policy::parse_policy("(Doctor AND Professor)"), key, rng);
    CHECK(decrypt(su.pk, ruk.key, ct) == key);
    auto beta = cur.random_nonzero_scalar(rng);
    auto target = cur.dual_generator().pow(beta);
    auto rct = reencrypt_corrected(su.msk, su.pk, target.g2_part, ct,
                                   policy::parse_policy("Doctor"), rng);
    auto cdk = issue_crossdomain_key(cur, beta, {"Doctor"});
    CHECK(decrypt_reencrypted(cdk, rct) == key);
    auto rk = rekeygen(ruk, target, su.pk, rng);
    auto leg = reencrypt_legacy(su.pk, rk, ct, policy::parse_policy("Doctor"), rng);
    // structural identity holds on the curve too
    auto lhs = pair(leg.leaves.at(1).first, cur.g2()) *
               pair(cur.hash_to_g1(to_bytes("Doctor")), leg.leaves.at(1).second);
    auto vb = pair(leg.protection.first, cur.g2()) *
              pair(cur.hash_to_g1(to_bytes("b")), leg.protection.second);
    // single-leaf matrix rows recombine as 2*row0 - row1 = v' and a2p = g1^{v'}
    auto two = cur.scalar_from_u64(2);
    CHECK(vb.pow(two) / lhs == pair(leg.a2p, cur.g2()));
}
