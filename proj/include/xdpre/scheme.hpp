#pragma once

// Attribute-based proxy re-encryption over the pairing abstraction.
//
// Same-domain flow:  setup -> keygen -> encrypt -> decrypt.
// Cross-domain flow: the proxy turns a ciphertext under policy1 into one
// under policy2 for a target authority key.  Two modes exist:
//   legacy    reproduces the original re-encryption composition unchanged;
//             structurally well-typed but exempt from round-trip guarantees
//   corrected proxy-side unblinding plus re-blinding under the target key;
//             round-trips with decrypt_reencrypted
//
// Keys never retain their sampling randomness; RetainedUserKey is the
// owner-side fixture that additionally keeps the per-attribute scalars the
// legacy re-key derivation consumes.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xdpre/bytes.hpp"
#include "xdpre/groups.hpp"
#include "xdpre/policy.hpp"
#include "xdpre/rng.hpp"

namespace xdpre::scheme {

struct MasterSecretKey {
    groups::Scalar m;
    groups::Scalar n;
};

struct PublicKey {
    groups::Backend backend;
    groups::DualElem g;                        // generator
    groups::DualElem h;                        // g^n
    groups::GTElem egg_m;                      // pair(g1, g2)^m
    std::map<std::string, groups::DualElem> w; // attribute blinds W_i = g^{p_i}
    groups::DualElem wb;                       // protection blind Wb = g^{p_b}
};

// SK1 = g2^{(m+k)/n}; SK2 = (g2^{kb}, g2^k Wb2^{kb});
// SK3[a] = (g2^{k_a}, g2^k W_{a,2}^{k_a}).  sk2 is the protection key; a key
// stripped of it cannot decrypt anything (the b-row is in every authorized
// set).
struct UserSecretKey {
    std::set<std::string> attrs;
    groups::G2Elem sk1;
    std::optional<std::pair<groups::G2Elem, groups::G2Elem>> sk2;
    std::map<std::string, std::pair<groups::G2Elem, groups::G2Elem>> sk3;
};

// Owner-side keygen output: the key plus its sampling scalars.
struct RetainedUserKey {
    UserSecretKey key;
    groups::Scalar k;
    groups::Scalar kb;
    std::map<std::string, groups::Scalar> k_attr;
};

// KEM key: a GT element; kdf() derives the byte key.
struct SymmetricKey {
    groups::GTElem value;
    bool operator==(const SymmetricKey&) const = default;
};

struct Ciphertext {
    policy::AccessMatrix matrix;
    groups::GTElem a1;                               // K * egg_m^v
    groups::G1Elem a2;                               // h1^v = g1^{nv}
    std::pair<groups::G1Elem, groups::G1Elem> protection; // (g1^{vb}, Wb1^{vb})
    // row -> (g1^{v_i}, W_{rho(i),1}^{v_i}) for every non-protection row
    std::map<size_t, std::pair<groups::G1Elem, groups::G1Elem>> leaves;
};

struct ReKey {
    groups::G1Elem rk1;                        // g1^alpha * target1
    groups::G1Elem rk2;                        // g1^alpha * Wb1^mu
    std::map<std::string, groups::G1Elem> rk3; // g1^{k_a * t}
    groups::G2Elem target_pk;
};

enum class ReEncMode { legacy, corrected };

struct ReEncryptedCiphertext {
    policy::AccessMatrix matrix;
    ReEncMode mode;
    groups::GTElem a1p;
    groups::G1Elem a2p; // g1^{v'}
    // every row: (g1^{v'_i} * H(rho'(i))^{-r'_i}, g2^{r'_i})
    std::pair<groups::G1Elem, groups::G2Elem> protection;
    std::map<size_t, std::pair<groups::G1Elem, groups::G2Elem>> leaves;
};

// Target-domain credential: K0 = g2^{beta}, D[a] = H(a)^{beta}, plus the
// protection entry db = H(b)^{beta} held by every key.
struct CrossDomainUserKey {
    std::set<std::string> attrs;
    groups::G2Elem k0;
    std::map<std::string, groups::G1Elem> d;
    groups::G1Elem db;
};

struct SetupResult {
    MasterSecretKey msk;
    PublicKey pk;
};

// One W entry per universe attribute (drawn in the given order) plus Wb.
// DuplicateAttribute on repeats, ReservedAttribute on "b",
// InvalidParameter on names outside [A-Za-z0-9_]+.
SetupResult setup(const groups::Backend& backend, const std::vector<std::string>& universe,
                  Rng& rng);
// Same with caller-chosen m and n (hand-traceable fixtures).
SetupResult setup_from_secrets(const groups::Backend& backend,
                               const std::vector<std::string>& universe,
                               const groups::Scalar& m, const groups::Scalar& n, Rng& rng);

// UnknownAttribute when attrs is not a subset of the pk universe.
UserSecretKey keygen(const MasterSecretKey& msk, const PublicKey& pk,
                     const std::set<std::string>& attrs, Rng& rng);
RetainedUserKey keygen_retained(const MasterSecretKey& msk, const PublicKey& pk,
                                const std::set<std::string>& attrs, Rng& rng);
// Same with caller-chosen k.
RetainedUserKey keygen_from_secrets(const MasterSecretKey& msk, const PublicKey& pk,
                                    const std::set<std::string>& attrs,
                                    const groups::Scalar& k, Rng& rng);

SymmetricKey random_symmetric_key(const groups::Backend& backend, Rng& rng);

// Fresh v in Z_p^*; UnknownAttribute when the policy uses an attribute
// outside the pk universe.
Ciphertext encrypt(const PublicKey& pk, const policy::PolicyNode& policy,
                   const SymmetricKey& key, Rng& rng);
// Deterministic core over a prepared share vector (v = shares.secret).
Ciphertext encrypt_from_shares(const PublicKey& pk, const SymmetricKey& key,
                               policy::AccessMatrix matrix,
                               const policy::ShareVector& shares);

// MissingProtectionKey when usk.sk2 is absent; PolicyNotSatisfied when the
// key's attributes cannot satisfy the ciphertext policy; MalformedCiphertext
// on structural damage.
SymmetricKey decrypt(const PublicKey& pk, const UserSecretKey& usk, const Ciphertext& ct);

// target must be a registered dual of the target-domain authority key
// (TargetKeyNotDual otherwise).
ReKey rekeygen(const RetainedUserKey& retained, const groups::DualElem& target,
               const PublicKey& pk, Rng& rng);
ReKey rekeygen_from_secrets(const RetainedUserKey& retained, const groups::DualElem& target,
                            const PublicKey& pk, const groups::Scalar& alpha,
                            const groups::Scalar& mu, const groups::Scalar& t);

ReEncryptedCiphertext reencrypt_legacy(const PublicKey& pk, const ReKey& rk,
                                       const Ciphertext& ct,
                                       const policy::PolicyNode& policy2, Rng& rng);

// KeyMismatch when msk does not match pk.
ReEncryptedCiphertext reencrypt_corrected(const MasterSecretKey& msk, const PublicKey& pk,
                                          const groups::G2Elem& target_pk,
                                          const Ciphertext& ct,
                                          const policy::PolicyNode& policy2, Rng& rng);
ReEncryptedCiphertext reencrypt_corrected_from_secrets(
    const MasterSecretKey& msk, const PublicKey& pk, const groups::G2Elem& target_pk,
    const Ciphertext& ct, const policy::PolicyNode& policy2,
    const groups::Scalar& v_prime, Rng& rng);

// beta must be nonzero (InvalidParameter); ReservedAttribute if attrs names b.
CrossDomainUserKey issue_crossdomain_key(const groups::Backend& backend,
                                         const groups::Scalar& beta,
                                         const std::set<std::string>& attrs);

// UnsupportedMode on legacy ciphertexts; PolicyNotSatisfied / MalformedCiphertext
// as in decrypt.
SymmetricKey decrypt_reencrypted(const CrossDomainUserKey& cdk,
                                 const ReEncryptedCiphertext& ct2);

// 32-byte key derived from the serialized KEM key.
std::array<uint8_t, 32> kdf(const SymmetricKey& key);

// Demo-grade DEM, not production hardened: XOR keystream (block_i =
// sha256(key || counter_i)) plus an appended sha256(key || ciphertext) tag.
Bytes dem_seal(const std::array<uint8_t, 32>& key, BytesView payload);
// IntegrityError on any tag mismatch or truncation.
Bytes dem_open(const std::array<uint8_t, 32>& key, BytesView sealed);

} // namespace xdpre::scheme
