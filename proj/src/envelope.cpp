#include "xdpre/envelope.hpp"

#include <json.hpp>

#include "xdpre/errors.hpp"
#include "xdpre/policy.hpp"

namespace xdpre::envelope {

using groups::Backend;
using groups::BackendId;
using groups::DualElem;
using groups::G1Elem;
using groups::G2Elem;
using groups::GTElem;
using groups::Scalar;
using nlohmann::json;

namespace {

std::string hex_of(const Bytes& b) { return hex_encode(b); }

json dual_json(const DualElem& d) {
    return {{"g1", hex_of(serialize(d.g1_part))}, {"g2", hex_of(serialize(d.g2_part))}};
}

json pair_json(const std::pair<G1Elem, G1Elem>& p) {
    return {{"first", hex_of(serialize(p.first))}, {"second", hex_of(serialize(p.second))}};
}

json pair_json(const std::pair<G1Elem, G2Elem>& p) {
    return {{"first", hex_of(serialize(p.first))}, {"second", hex_of(serialize(p.second))}};
}

json pair_json(const std::pair<G2Elem, G2Elem>& p) {
    return {{"first", hex_of(serialize(p.first))}, {"second", hex_of(serialize(p.second))}};
}

json envelope_json(const Backend& backend, const std::string& object_type, json fields) {
    json out{{"format_version", format_version},
             {"backend_id", (int)backend.id()},
             {"object_type", object_type},
             {"fields", std::move(fields)}};
    if (backend.id() == BackendId::debug) out["debug_prime"] = backend.debug_prime();
    return out;
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

[[noreturn]] void field_error(const std::string& field, const std::string& detail) {
    throw DecodeError("envelope field '" + field + "': " + detail);
}

json parse_envelope(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DecodeError("envelope byte " + std::to_string(e.byte) +
                          ": invalid JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw DecodeError("envelope byte 0: expected a JSON object");
    if (!j.contains("format_version") || !j["format_version"].is_number_integer() ||
        j["format_version"].get<int>() != format_version)
        field_error("format_version", "expected " + std::to_string(format_version));
    return j;
}

Backend header_backend(const json& j) {
    if (!j.contains("backend_id") || !j["backend_id"].is_number_integer())
        field_error("backend_id", "missing or not an integer");
    int id = j["backend_id"].get<int>();
    if (id == (int)BackendId::debug) {
        if (!j.contains("debug_prime") || !j["debug_prime"].is_number_unsigned())
            field_error("debug_prime", "required on the debug backend");
        return Backend::debug_backend(j["debug_prime"].get<uint64_t>());
    }
    if (id == (int)BackendId::curve) return Backend::curve_backend();
    field_error("backend_id", "unknown backend " + std::to_string(id));
}

json expect_fields(const json& j, const std::string& object_type) {
    if (!j.contains("object_type") || !j["object_type"].is_string())
        field_error("object_type", "missing or not a string");
    if (j["object_type"].get<std::string>() != object_type)
        field_error("object_type", "holds '" + j["object_type"].get<std::string>() +
                                       "', expected '" + object_type + "'");
    if (!j.contains("fields") || !j["fields"].is_object())
        field_error("fields", "missing or not an object");
    return j["fields"];
}

const json& member(const json& fields, const std::string& name) {
    if (!fields.contains(name)) field_error(name, "missing");
    return fields[name];
}

std::string str_member(const json& fields, const std::string& name) {
    const json& v = member(fields, name);
    if (!v.is_string()) field_error(name, "expected a string");
    return v.get<std::string>();
}

Bytes hex_member(const json& fields, const std::string& name) {
    try {
        return hex_decode(str_member(fields, name));
    } catch (const DecodeError& e) {
        field_error(name, e.what());
    }
}

G1Elem g1_member(const Backend& b, const json& fields, const std::string& name) {
    try {
        return b.parse_g1(hex_member(fields, name));
    } catch (const DecodeError& e) {
        field_error(name, e.what());
    }
}

G2Elem g2_member(const Backend& b, const json& fields, const std::string& name) {
    try {
        return b.parse_g2(hex_member(fields, name));
    } catch (const DecodeError& e) {
        field_error(name, e.what());
    }
}

GTElem gt_member(const Backend& b, const json& fields, const std::string& name) {
    try {
        return b.parse_gt(hex_member(fields, name));
    } catch (const DecodeError& e) {
        field_error(name, e.what());
    }
}

Scalar scalar_member(const Backend& b, const json& fields, const std::string& name) {
    try {
        return b.parse_scalar(hex_member(fields, name));
    } catch (const DecodeError& e) {
        field_error(name, e.what());
    }
}

DualElem dual_member(const Backend& b, const json& fields, const std::string& name) {
    const json& v = member(fields, name);
    if (!v.is_object()) field_error(name, "expected an object with g1/g2");
    return {g1_member(b, v, "g1"), g2_member(b, v, "g2")};
}

template <class First, class Second, class ParseFirst, class ParseSecond>
std::pair<First, Second> pair_member(const json& fields, const std::string& name,
                                     ParseFirst&& pf, ParseSecond&& ps) {
    const json& v = member(fields, name);
    if (!v.is_object()) field_error(name, "expected an object with first/second");
    return {pf(v, "first"), ps(v, "second")};
}

std::set<std::string> attrs_member(const json& fields, const std::string& name) {
    const json& v = member(fields, name);
    if (!v.is_array()) field_error(name, "expected an array");
    std::set<std::string> out;
    for (const auto& a : v) {
        if (!a.is_string()) field_error(name, "expected attribute strings");
        if (!out.insert(a.get<std::string>()).second)
            field_error(name, "duplicate attribute '" + a.get<std::string>() + "'");
    }
    return out;
}

policy::AccessMatrix matrix_member(const Backend& b, const json& fields) {
    try {
        return policy::parse_matrix(b, str_member(fields, "matrix"));
    } catch (const DecodeError& e) {
        field_error("matrix", e.what());
    }
}

json sealed_json(const std::optional<Bytes>& sealed) {
    return sealed ? json(hex_of(*sealed)) : json(nullptr);
}

std::optional<Bytes> sealed_member(const json& fields) {
    const json& v = member(fields, "sealed");
    if (v.is_null()) return std::nullopt;
    return hex_member(fields, "sealed");
}

// leaves: row index (as a decimal key) -> component pair
template <class Second>
json leaves_json(const std::map<size_t, std::pair<G1Elem, Second>>& leaves) {
    json out = json::object();
    for (const auto& [row, comp] : leaves) out[std::to_string(row)] = pair_json(comp);
    return out;
}

template <class Second, class ParseSecond>
std::map<size_t, std::pair<G1Elem, Second>> leaves_member(const Backend& b,
                                                          const json& fields,
                                                          ParseSecond&& ps) {
    const json& v = member(fields, "leaves");
    if (!v.is_object()) field_error("leaves", "expected an object");
    std::map<size_t, std::pair<G1Elem, Second>> out;
    for (const auto& [key, comp] : v.items()) {
        size_t row = 0;
        try {
            size_t used = 0;
            row = std::stoul(key, &used);
            if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            field_error("leaves", "row key '" + key + "' is not a number");
        }
        if (!comp.is_object()) field_error("leaves", "expected component objects");
        out.emplace(row, std::pair{g1_member(b, comp, "first"), ps(comp, "second")});
    }
    return out;
}

} // namespace

Backend envelope_backend(const std::string& text) {
    return header_backend(parse_envelope(text));
}

// ---- pk ----

std::string encode_pk(const scheme::PublicKey& pk) {
    json w = json::object();
    for (const auto& [a, d] : pk.w) w[a] = dual_json(d);
    json fields{{"g", dual_json(pk.g)},
                {"h", dual_json(pk.h)},
                {"egg_m", hex_of(serialize(pk.egg_m))},
                {"w", std::move(w)},
                {"wb", dual_json(pk.wb)}};
    return render(envelope_json(pk.backend, "pk", std::move(fields)));
}

scheme::PublicKey decode_pk(const std::string& text) {
    json j = parse_envelope(text);
    Backend b = header_backend(j);
    json fields = expect_fields(j, "pk");
    scheme::PublicKey pk{b,
                         dual_member(b, fields, "g"),
                         dual_member(b, fields, "h"),
                         gt_member(b, fields, "egg_m"),
                         {},
                         dual_member(b, fields, "wb")};
    const json& w = member(fields, "w");
    if (!w.is_object()) field_error("w", "expected an object");
    for (const auto& [a, d] : w.items()) {
        if (!d.is_object()) field_error("w", "expected dual objects");
        pk.w.emplace(a, DualElem{g1_member(b, d, "g1"), g2_member(b, d, "g2")});
    }
    return pk;
}

// ---- msk ----

std::string encode_msk(const scheme::MasterSecretKey& msk) {
    json fields{{"m", hex_of(serialize(msk.m))}, {"n", hex_of(serialize(msk.n))}};
    return render(envelope_json(groups::backend_of(msk.m), "msk", std::move(fields)));
}

scheme::MasterSecretKey decode_msk(const std::string& text) {
    json j = parse_envelope(text);
    Backend b = header_backend(j);
    json fields = expect_fields(j, "msk");
    return {scalar_member(b, fields, "m"), scalar_member(b, fields, "n")};
}

// ---- usk ----

namespace {

json usk_fields(const scheme::UserSecretKey& key) {
    json sk3 = json::object();
    for (const auto& [a, p] : key.sk3) sk3[a] = pair_json(p);
    json attrs = json::array();
    for (const auto& a : key.attrs) attrs.push_back(a);
    return json{{"attrs", std::move(attrs)},
                {"sk1", hex_of(serialize(key.sk1))},
                {"sk2", key.sk2 ? pair_json(*key.sk2) : json(nullptr)},
                {"sk3", std::move(sk3)},
                {"retained", nullptr}};
}

scheme::UserSecretKey usk_from_fields(const Backend& b, const json& fields) {
    auto g2p = [&](const json& v, const std::string& n) { return g2_member(b, v, n); };
    scheme::UserSecretKey key{attrs_member(fields, "attrs"),
                              g2_member(b, fields, "sk1"),
                              {},
                              {}};
    const json& sk2 = member(fields, "sk2");
    if (!sk2.is_null())
        key.sk2 = pair_member<G2Elem, G2Elem>(fields, "sk2", g2p, g2p);
    const json& sk3 = member(fields, "sk3");
    if (!sk3.is_object()) field_error("sk3", "expected an object");
    for (const auto& [a, p] : sk3.items()) {
        if (!p.is_object()) field_error("sk3", "expected component objects");
        key.sk3.emplace(a, std::pair{g2_member(b, p, "first"), g2_member(b, p, "second")});
    }
    if (key.sk3.size() != key.attrs.size() ||
        !std::all_of(key.attrs.begin(), key.attrs.end(),
                     [&](const std::string& a) { return key.sk3.count(a) > 0; }))
        field_error("sk3", "attribute components do not match attrs");
    return key;
}

} // namespace

std::string encode_usk(const scheme::UserSecretKey& key) {
    return render(envelope_json(groups::backend_of(key.sk1), "usk", usk_fields(key)));
}

std::string encode_usk_retained(const scheme::RetainedUserKey& key) {
    json fields = usk_fields(key.key);
    json k_attr = json::object();
    for (const auto& [a, s] : key.k_attr) k_attr[a] = hex_of(serialize(s));
    fields["retained"] = json{{"k", hex_of(serialize(key.k))},
                              {"kb", hex_of(serialize(key.kb))},
                              {"k_attr", std::move(k_attr)}};
    return render(envelope_json(groups::backend_of(key.key.sk1), "usk", std::move(fields)));
}

scheme::UserSecretKey decode_usk(const std::string& text) {
    json j = parse_envelope(text);
    Backend b = header_backend(j);
    return usk_from_fields(b, expect_fields(j, "usk"));
}

scheme::RetainedUserKey decode_usk_retained(const std::string& text) {
    json j = parse_envelope(text);
    Backend b = header_backend(j);
    json fields = expect_fields(j, "usk");
    scheme::UserSecretKey key = usk_from_fields(b, fields);
    const json& retained = member(fields, "retained");
    if (retained.is_null())
        throw MissingRetainedKey("the key envelope has no retained scalar block");
    if (!retained.is_object()) field_error("retained", "expected an object");
    scheme::RetainedUserKey out{std::move(key), scalar_member(b, retained, "k"),
                                scalar_member(b, retained, "kb"), {}};
    const json& k_attr = member(retained, "k_attr");
    if (!k_attr.is_object()) field_error("k_attr", "expected an object");
    for (const auto& [a, s] : k_attr.items()) {
        json wrap{{"v", s}};
        out.k_attr.emplace(a, scalar_member(b, wrap, "v"));
    }
    if (out.k_attr.size() != out.key.attrs.size())
        field_error("k_attr", "retained scalars do not match attrs");
    return out;
}

// ---- ct ----

std::string encode_ct(const scheme::Ciphertext& ct, const std::optional<Bytes>& sealed) {
    json fields{{"matrix", policy::dump_matrix(ct.matrix)},
                {"a1", hex_of(serialize(ct.a1))},
                {"a2", hex_of(serialize(ct.a2))},
                {"protection", pair_json(ct.protection)},
                {"leaves", leaves_json(ct.leaves)},
                {"sealed", sealed_json(sealed)}};
    return render(envelope_json(groups::backend_of(ct.a1), "ct", std::move(fields)));
}

SealedCiphertext decode_ct(const std::string& text) {
    json j = parse_envelope(text);
    Backend b = header_backend(j);
    json fields = expect_fields(j, "ct");
    auto g1p = [&](const json& v, const std::string& n) { return g1_member(b, v, n); };
    scheme::Ciphertext ct{
        matrix_member(b, fields), gt_member(b, fields, "a1"), g1_member(b, fields, "a2"),
        pair_member<G1Elem, G1Elem>(fields, "protection", g1p, g1p),
        leaves_member<G1Elem>(b, fields, g1p)};
    return {std::move(ct), sealed_member(fields)};
}

// ---- rk ----

std::string encode_rk(const scheme::ReKey& rk) {
    json rk3 = json::object();
    for (const auto& [a, e] : rk.rk3) rk3[a] = hex_of(serialize(e));
    json fields{{"rk1", hex_of(serialize(rk.rk1))},
                {"rk2", hex_of(serialize(rk.rk2))},
                {"rk3", std::move(rk3)},
                {"target_pk", hex_of(serialize(rk.target_pk))}};
    return render(envelope_json(groups::backend_of(rk.rk1), "rk", std::move(fields)));
}

scheme::ReKey decode_rk(const std::string& text) {
    json j = parse_envelope(text);
    Backend b = header_backend(j);
    json fields = expect_fields(j, "rk");
    scheme::ReKey rk{g1_member(b, fields, "rk1"), g1_member(b, fields, "rk2"), {},
                     g2_member(b, fields, "target_pk")};
    const json& rk3 = member(fields, "rk3");
    if (!rk3.is_object()) field_error("rk3", "expected an object");
    for (const auto& [a, e] : rk3.items()) {
        json wrap{{"v", e}};
        rk.rk3.emplace(a, g1_member(b, wrap, "v"));
    }
    return rk;
}

// ---- rct ----

std::string encode_rct(const scheme::ReEncryptedCiphertext& ct,
                       const std::optional<Bytes>& sealed) {
    json fields{{"matrix", policy::dump_matrix(ct.matrix)},
                {"mode", ct.mode == scheme::ReEncMode::legacy ? "legacy" : "corrected"},
                {"a1p", hex_of(serialize(ct.a1p))},
                {"a2p", hex_of(serialize(ct.a2p))},
                {"protection", pair_json(ct.protection)},
                {"leaves", leaves_json(ct.leaves)},
                {"sealed", sealed_json(sealed)}};
    return render(envelope_json(groups::backend_of(ct.a1p), "rct", std::move(fields)));
}

SealedReEncrypted decode_rct(const std::string& text) {
    json j = parse_envelope(text);
    Backend b = header_backend(j);
    json fields = expect_fields(j, "rct");
    std::string mode = str_member(fields, "mode");
    if (mode != "legacy" && mode != "corrected")
        field_error("mode", "expected 'legacy' or 'corrected'");
    auto g1p = [&](const json& v, const std::string& n) { return g1_member(b, v, n); };
    auto g2p = [&](const json& v, const std::string& n) { return g2_member(b, v, n); };
    scheme::ReEncryptedCiphertext ct{
        matrix_member(b, fields),
        mode == "legacy" ? scheme::ReEncMode::legacy : scheme::ReEncMode::corrected,
        gt_member(b, fields, "a1p"),
        g1_member(b, fields, "a2p"),
        pair_member<G1Elem, G2Elem>(fields, "protection", g1p, g2p),
        leaves_member<G2Elem>(b, fields, g2p)};
    return {std::move(ct), sealed_member(fields)};
}

// ---- cdk ----

std::string encode_cdk(const CrossDomainEnvelope& cdk) {
    json d = json::object();
    for (const auto& [a, e] : cdk.key.d) d[a] = hex_of(serialize(e));
    json attrs = json::array();
    for (const auto& a : cdk.key.attrs) attrs.push_back(a);
    json fields{{"attrs", std::move(attrs)},
                {"k0", hex_of(serialize(cdk.key.k0))},
                {"d", std::move(d)},
                {"db", hex_of(serialize(cdk.key.db))},
                {"registration", dual_json(cdk.registration)}};
    return render(envelope_json(groups::backend_of(cdk.key.k0), "cdk", std::move(fields)));
}

CrossDomainEnvelope decode_cdk(const std::string& text) {
    json j = parse_envelope(text);
    Backend b = header_backend(j);
    json fields = expect_fields(j, "cdk");
    scheme::CrossDomainUserKey key{attrs_member(fields, "attrs"),
                                   g2_member(b, fields, "k0"),
                                   {},
                                   g1_member(b, fields, "db")};
    const json& d = member(fields, "d");
    if (!d.is_object()) field_error("d", "expected an object");
    for (const auto& [a, e] : d.items()) {
        json wrap{{"v", e}};
        key.d.emplace(a, g1_member(b, wrap, "v"));
    }
    if (key.d.size() != key.attrs.size() ||
        !std::all_of(key.attrs.begin(), key.attrs.end(),
                     [&](const std::string& a) { return key.d.count(a) > 0; }))
        field_error("d", "attribute entries do not match attrs");
    return {std::move(key), dual_member(b, fields, "registration")};
}

} // namespace xdpre::envelope
