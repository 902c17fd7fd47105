#pragma once

// Versioned JSON envelopes for every persistable object:
//   {format_version, backend_id, [debug_prime,] object_type, fields}
// Group elements are the groups-module byte encoding as lowercase hex;
// matrices embed the policy dump format.  Envelopes written on the debug
// backend carry the modulus, so decoding needs no out-of-band context.
// Every malformed input raises DecodeError naming the offending field.

#include <optional>
#include <string>

#include "xdpre/bytes.hpp"
#include "xdpre/groups.hpp"
#include "xdpre/scheme.hpp"

namespace xdpre::envelope {

inline constexpr int format_version = 1;

// Ciphertext envelopes optionally carry a sealed DEM payload.
struct SealedCiphertext {
    scheme::Ciphertext ct;
    std::optional<Bytes> sealed;
};

struct SealedReEncrypted {
    scheme::ReEncryptedCiphertext ct;
    std::optional<Bytes> sealed;
};

// A cross-domain credential ships with the authority's public registration
// (g1^beta, g2^beta): the g2 part is the re-encryption target key and the
// dual pair is what rekeygen verifies.
struct CrossDomainEnvelope {
    scheme::CrossDomainUserKey key;
    groups::DualElem registration;
};

std::string encode_pk(const scheme::PublicKey& pk);
std::string encode_msk(const scheme::MasterSecretKey& msk);
std::string encode_usk(const scheme::UserSecretKey& key);
std::string encode_usk_retained(const scheme::RetainedUserKey& key);
std::string encode_ct(const scheme::Ciphertext& ct,
                      const std::optional<Bytes>& sealed = std::nullopt);
std::string encode_rk(const scheme::ReKey& rk);
std::string encode_rct(const scheme::ReEncryptedCiphertext& ct,
                       const std::optional<Bytes>& sealed = std::nullopt);
std::string encode_cdk(const CrossDomainEnvelope& cdk);

scheme::PublicKey decode_pk(const std::string& text);
scheme::MasterSecretKey decode_msk(const std::string& text);
scheme::UserSecretKey decode_usk(const std::string& text);
// MissingRetainedKey when the envelope lacks the retained scalar block.
scheme::RetainedUserKey decode_usk_retained(const std::string& text);
SealedCiphertext decode_ct(const std::string& text);
scheme::ReKey decode_rk(const std::string& text);
SealedReEncrypted decode_rct(const std::string& text);
CrossDomainEnvelope decode_cdk(const std::string& text);

// Header peek: the backend an envelope was written on.
groups::Backend envelope_backend(const std::string& text);

} // namespace xdpre::envelope
