#include "xdpre/scheme.hpp"

#include <algorithm>

#include "xdpre/errors.hpp"

namespace xdpre::scheme {

using groups::Backend;
using groups::DualElem;
using groups::G1Elem;
using groups::G2Elem;
using groups::GTElem;
using groups::Scalar;
using policy::AccessMatrix;
using policy::PolicyNode;
using policy::protection_attribute;
using policy::ShareVector;

namespace {

bool valid_attr_name(const std::string& name) {
    if (name.empty()) return false;
    for (char c : name)
        if (!((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
              (c >= '0' && c <= '9') || c == '_'))
            return false;
    return true;
}

void collect_attrs(const PolicyNode& node, std::set<std::string>& out) {
    if (node.is_leaf()) {
        out.insert(node.name);
        return;
    }
    for (const auto& c : node.children) collect_attrs(c, out);
}

void require_known(const PublicKey& pk, const std::set<std::string>& attrs,
                   const char* what) {
    for (const auto& a : attrs)
        if (!pk.w.count(a))
            throw UnknownAttribute(std::string(what) + " uses attribute '" + a +
                                   "' outside the pk universe");
}

G1Elem hash_attr(const Backend& backend, const std::string& attr) {
    return backend.hash_to_g1(to_bytes(attr));
}

// structural sanity shared by both decrypt paths
template <class Pair>
void check_ct_shape(const AccessMatrix& matrix,
                    const std::pair<G1Elem, Pair>& /*protection*/,
                    const std::map<size_t, std::pair<G1Elem, Pair>>& leaves) {
    if (matrix.rows() < 2 || matrix.protection_row != 0 ||
        matrix.rho.empty() || matrix.rho[0] != protection_attribute)
        throw MalformedCiphertext("matrix does not carry the protection row");
    if (leaves.size() != matrix.rows() - 1)
        throw MalformedCiphertext("leaf component count does not match the matrix");
    for (size_t r = 1; r < matrix.rows(); ++r)
        if (!leaves.count(r))
            throw MalformedCiphertext("missing leaf component for row " +
                                      std::to_string(r));
}

} // namespace

SetupResult setup_from_secrets(const Backend& backend,
                               const std::vector<std::string>& universe,
                               const Scalar& m, const Scalar& n, Rng& rng) {
    std::set<std::string> seen;
    for (const auto& a : universe) {
        if (a == protection_attribute)
            throw ReservedAttribute("the protection attribute b cannot join the universe");
        if (!valid_attr_name(a))
            throw InvalidParameter("attribute name must match [A-Za-z0-9_]+: '" + a + "'");
        if (!seen.insert(a).second)
            throw DuplicateAttribute("attribute '" + a + "' appears twice in the universe");
    }
    if (m.is_zero() || n.is_zero())
        throw InvalidParameter("master scalars must be nonzero");

    DualElem g = backend.dual_generator();
    PublicKey pk{backend,
                 g,
                 g.pow(n),
                 backend.gt().pow(m),
                 {},
                 g.pow(backend.random_nonzero_scalar(rng))};
    for (const auto& a : universe)
        pk.w.emplace(a, g.pow(backend.random_nonzero_scalar(rng)));
    return {MasterSecretKey{m, n}, std::move(pk)};
}

SetupResult setup(const Backend& backend, const std::vector<std::string>& universe,
                  Rng& rng) {
    Scalar m = backend.random_nonzero_scalar(rng);
    Scalar n = backend.random_nonzero_scalar(rng);
    return setup_from_secrets(backend, universe, m, n, rng);
}

RetainedUserKey keygen_from_secrets(const MasterSecretKey& msk, const PublicKey& pk,
                                    const std::set<std::string>& attrs, const Scalar& k,
                                    Rng& rng) {
    require_known(pk, attrs, "key request");
    if (k.is_zero()) throw InvalidParameter("k must be nonzero");
    const Backend& backend = pk.backend;
    G2Elem g2 = pk.g.g2_part;
    G2Elem g2_k = g2.pow(k);

    UserSecretKey key{attrs, g2.pow((msk.m + k) * msk.n.inverse()), {}, {}};
    Scalar kb = backend.random_nonzero_scalar(rng);
    key.sk2 = {{g2.pow(kb), g2_k * pk.wb.g2_part.pow(kb)}};

    RetainedUserKey out{std::move(key), k, kb, {}};
    for (const auto& a : attrs) {
        Scalar ka = backend.random_nonzero_scalar(rng);
        out.key.sk3.emplace(a, std::pair{g2.pow(ka), g2_k * pk.w.at(a).g2_part.pow(ka)});
        out.k_attr.emplace(a, ka);
    }
    return out;
}

RetainedUserKey keygen_retained(const MasterSecretKey& msk, const PublicKey& pk,
                                const std::set<std::string>& attrs, Rng& rng) {
    Scalar k = pk.backend.random_nonzero_scalar(rng);
    return keygen_from_secrets(msk, pk, attrs, k, rng);
}

UserSecretKey keygen(const MasterSecretKey& msk, const PublicKey& pk,
                     const std::set<std::string>& attrs, Rng& rng) {
    return keygen_retained(msk, pk, attrs, rng).key;
}

SymmetricKey random_symmetric_key(const Backend& backend, Rng& rng) {
    return {backend.random_gt(rng)};
}

Ciphertext encrypt_from_shares(const PublicKey& pk, const SymmetricKey& key,
                               AccessMatrix matrix, const ShareVector& shares) {
    if (shares.shares.size() != matrix.rows())
        throw InvalidParameter("share vector does not match the matrix");
    G1Elem g1 = pk.g.g1_part;
    const Scalar& v = shares.secret;
    const Scalar& vb = shares.shares[matrix.protection_row];

    Ciphertext ct{std::move(matrix),
                  key.value * pk.egg_m.pow(v),
                  pk.h.g1_part.pow(v),
                  {g1.pow(vb), pk.wb.g1_part.pow(vb)},
                  {}};
    for (size_t r = 1; r < ct.matrix.rows(); ++r) {
        const Scalar& vi = shares.shares[r];
        ct.leaves.emplace(
            r, std::pair{g1.pow(vi), pk.w.at(ct.matrix.rho[r]).g1_part.pow(vi)});
    }
    return ct;
}

Ciphertext encrypt(const PublicKey& pk, const PolicyNode& policy, const SymmetricKey& key,
                   Rng& rng) {
    std::set<std::string> used;
    collect_attrs(policy, used);
    require_known(pk, used, "policy");
    AccessMatrix matrix = policy::build_matrix(pk.backend, policy);
    Scalar v = pk.backend.random_nonzero_scalar(rng);
    ShareVector shares = policy::generate_shares(matrix, v, rng);
    return encrypt_from_shares(pk, key, std::move(matrix), shares);
}

SymmetricKey decrypt(const PublicKey& pk, const UserSecretKey& usk, const Ciphertext& ct) {
    if (!usk.sk2)
        throw MissingProtectionKey("the key carries no protection component");
    check_ct_shape(ct.matrix, ct.protection, ct.leaves);

    std::set<std::string> attrs;
    for (const auto& [a, _] : usk.sk3) attrs.insert(a);
    std::vector<size_t> rows = policy::satisfying_rows(ct.matrix, attrs, true);
    policy::ReconPlan plan = policy::recon_coefficients(ct.matrix, rows);

    GTElem fw = pk.backend.gt_identity();
    for (size_t r : rows) {
        const auto& sk = r == ct.matrix.protection_row ? *usk.sk2
                                                       : usk.sk3.at(ct.matrix.rho[r]);
        const auto& comp = r == ct.matrix.protection_row ? ct.protection : ct.leaves.at(r);
        GTElem f = pair(comp.first, sk.second) / pair(comp.second, sk.first);
        fw = fw * f.pow(plan.coeffs.at(r));
    }
    return {ct.a1 * fw / pair(ct.a2, usk.sk1)};
}

ReKey rekeygen_from_secrets(const RetainedUserKey& retained, const DualElem& target,
                            const PublicKey& pk, const Scalar& alpha, const Scalar& mu,
                            const Scalar& t) {
    if (!groups::consistent_dual(pk.backend, target))
        throw TargetKeyNotDual("target key is not registered with matching dual parts");
    G1Elem g1 = pk.g.g1_part;
    ReKey rk{g1.pow(alpha) * target.g1_part, g1.pow(alpha) * pk.wb.g1_part.pow(mu), {},
             target.g2_part};
    for (const auto& [a, ka] : retained.k_attr) rk.rk3.emplace(a, g1.pow(ka * t));
    return rk;
}

ReKey rekeygen(const RetainedUserKey& retained, const DualElem& target, const PublicKey& pk,
               Rng& rng) {
    Scalar alpha = pk.backend.random_nonzero_scalar(rng);
    Scalar mu = pk.backend.random_nonzero_scalar(rng);
    Scalar t = pk.backend.random_nonzero_scalar(rng);
    return rekeygen_from_secrets(retained, target, pk, alpha, mu, t);
}

namespace {

// CT'2 / CT'3: fresh shares of v' with per-row blinding
// (g1^{v'_i} H(rho'(i))^{-r'_i}, g2^{r'_i})
ReEncryptedCiphertext reencrypt_rows(const PublicKey& pk, ReEncMode mode, GTElem a1p,
                                     const Scalar& v_prime, AccessMatrix matrix,
                                     Rng& rng) {
    const Backend& backend = pk.backend;
    ShareVector shares = policy::generate_shares(matrix, v_prime, rng);
    G1Elem g1 = pk.g.g1_part;
    G2Elem g2 = pk.g.g2_part;

    auto blind = [&](const std::string& label, const Scalar& share) {
        Scalar r = backend.random_nonzero_scalar(rng);
        G1Elem b = g1.pow(share) * hash_attr(backend, label).pow(r).inverse();
        return std::pair{b, g2.pow(r)};
    };

    auto prot = blind(matrix.rho[0], shares.shares[0]);
    ReEncryptedCiphertext out{std::move(matrix),   mode, std::move(a1p),
                              g1.pow(v_prime), std::move(prot), {}};
    for (size_t r = 1; r < out.matrix.rows(); ++r)
        out.leaves.emplace(r, blind(out.matrix.rho[r], shares.shares[r]));
    return out;
}

AccessMatrix checked_matrix2(const PublicKey& pk, const PolicyNode& policy2) {
    std::set<std::string> used;
    collect_attrs(policy2, used);
    require_known(pk, used, "target policy");
    return policy::build_matrix(pk.backend, policy2);
}

} // namespace

ReEncryptedCiphertext reencrypt_legacy(const PublicKey& pk, const ReKey& rk,
                                       const Ciphertext& ct, const PolicyNode& policy2,
                                       Rng& rng) {
    AccessMatrix matrix2 = checked_matrix2(pk, policy2);
    const Backend& backend = pk.backend;
    G2Elem g2 = pk.g.g2_part;
    Scalar v_prime = backend.random_nonzero_scalar(rng);

    // legacy composition, kept verbatim: G1-only factors lift to GT by
    // pairing with g2, the rk3 set enters as the product of its entries, and
    // the target key absorbs v'.  Exempt from round-trip guarantees.
    GTElem lift1 = pair(ct.a2, g2) * pair(rk.rk1, g2);
    GTElem lift2 = pair(ct.a2, g2) * pair(rk.rk2, g2);
    G1Elem rk3_prod = backend.g1_identity();
    for (const auto& [_, e] : rk.rk3) rk3_prod = rk3_prod * e;
    GTElem t3 = pair(rk3_prod, rk.target_pk * g2.pow(v_prime));
    GTElem a1p = ct.a1 * lift1 / (lift2 * t3);

    return reencrypt_rows(pk, ReEncMode::legacy, std::move(a1p), v_prime,
                          std::move(matrix2), rng);
}

ReEncryptedCiphertext reencrypt_corrected_from_secrets(
    const MasterSecretKey& msk, const PublicKey& pk, const G2Elem& target_pk,
    const Ciphertext& ct, const PolicyNode& policy2, const Scalar& v_prime, Rng& rng) {
    if (!(pk.h == pk.g.pow(msk.n)) ||
        !(pk.egg_m == pair(pk.g.g1_part, pk.g.g2_part).pow(msk.m)))
        throw KeyMismatch("master secret key does not match the public key");
    AccessMatrix matrix2 = checked_matrix2(pk, policy2);

    // unblind: pair(A2, g2)^{m/n} = e(g,g)^{mv}
    GTElem blind = pair(ct.a2, pk.g.g2_part).pow(msk.m * msk.n.inverse());
    GTElem key = ct.a1 / blind;
    GTElem a1p = key * pair(pk.g.g1_part, target_pk).pow(v_prime);

    return reencrypt_rows(pk, ReEncMode::corrected, std::move(a1p), v_prime,
                          std::move(matrix2), rng);
}

ReEncryptedCiphertext reencrypt_corrected(const MasterSecretKey& msk, const PublicKey& pk,
                                          const G2Elem& target_pk, const Ciphertext& ct,
                                          const PolicyNode& policy2, Rng& rng) {
    Scalar v_prime = pk.backend.random_nonzero_scalar(rng);
    return reencrypt_corrected_from_secrets(msk, pk, target_pk, ct, policy2, v_prime, rng);
}

CrossDomainUserKey issue_crossdomain_key(const Backend& backend, const Scalar& beta,
                                         const std::set<std::string>& attrs) {
    if (beta.is_zero()) throw InvalidParameter("beta must be nonzero");
    if (attrs.count(protection_attribute))
        throw ReservedAttribute("the protection attribute b is implicit in every "
                                "cross-domain key");
    CrossDomainUserKey cdk{attrs,
                           backend.g2().pow(beta),
                           {},
                           hash_attr(backend, protection_attribute).pow(beta)};
    for (const auto& a : attrs) cdk.d.emplace(a, hash_attr(backend, a).pow(beta));
    return cdk;
}

SymmetricKey decrypt_reencrypted(const CrossDomainUserKey& cdk,
                                 const ReEncryptedCiphertext& ct2) {
    if (ct2.mode != ReEncMode::corrected)
        throw UnsupportedMode("legacy re-encrypted ciphertexts do not decrypt");
    check_ct_shape(ct2.matrix, ct2.protection, ct2.leaves);

    std::set<std::string> attrs;
    for (const auto& [a, _] : cdk.d) attrs.insert(a);
    std::vector<size_t> rows = policy::satisfying_rows(ct2.matrix, attrs, true);
    policy::ReconPlan plan = policy::recon_coefficients(ct2.matrix, rows);

    const Backend backend = groups::backend_of(cdk.k0);
    GTElem fw = backend.gt_identity();
    for (size_t r : rows) {
        const auto& comp = r == ct2.matrix.protection_row ? ct2.protection
                                                          : ct2.leaves.at(r);
        const G1Elem& d = r == ct2.matrix.protection_row ? cdk.db
                                                         : cdk.d.at(ct2.matrix.rho[r]);
        GTElem f = pair(comp.first, cdk.k0) * pair(d, comp.second);
        fw = fw * f.pow(plan.coeffs.at(r));
    }
    return {ct2.a1p / fw};
}

std::array<uint8_t, 32> kdf(const SymmetricKey& key) {
    return sha256(groups::serialize(key.value));
}

namespace {

Bytes keystream_xor(const std::array<uint8_t, 32>& key, BytesView data) {
    Bytes out(data.begin(), data.end());
    Bytes block_input(key.begin(), key.end());
    block_input.resize(40);
    for (size_t off = 0, counter = 0; off < out.size(); off += 32, ++counter) {
        for (int i = 0; i < 8; ++i)
            block_input[32 + i] = (uint8_t)(counter >> (56 - 8 * i));
        auto block = sha256(block_input);
        for (size_t i = 0; i < 32 && off + i < out.size(); ++i) out[off + i] ^= block[i];
    }
    return out;
}

std::array<uint8_t, 32> dem_tag(const std::array<uint8_t, 32>& key, BytesView ct) {
    Bytes input(key.begin(), key.end());
    input.insert(input.end(), ct.begin(), ct.end());
    return sha256(input);
}

} // namespace

Bytes dem_seal(const std::array<uint8_t, 32>& key, BytesView payload) {
    Bytes out = keystream_xor(key, payload);
    auto tag = dem_tag(key, out);
    out.insert(out.end(), tag.begin(), tag.end());
    return out;
}

Bytes dem_open(const std::array<uint8_t, 32>& key, BytesView sealed) {
    if (sealed.size() < 32)
        throw IntegrityError("sealed payload is shorter than the integrity tag");
    BytesView ct = sealed.subspan(0, sealed.size() - 32);
    auto tag = dem_tag(key, ct);
    if (!std::equal(tag.begin(), tag.end(), sealed.end() - 32))
        throw IntegrityError("integrity tag mismatch");
    return keystream_xor(key, ct);
}

} // namespace xdpre::scheme
