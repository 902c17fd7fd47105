// Regenerates the frozen envelope fixtures under tests/golden/.  Run from
// anywhere: ./golden_gen <output-dir>.  The suite compares against the
// committed bytes, so regeneration is only appropriate together with an
// intentional format change.
#include "xdpre/bench.hpp"
#include "xdpre/envelope.hpp"
#include "xdpre/rng.hpp"
#include "xdpre/scheme.hpp"

#include "bench_fixture.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace xdpre;

namespace {

void write(const std::filesystem::path& dir, const std::string& name,
           const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) {
        std::fprintf(stderr, "cannot write %s\n", (dir / name).string().c_str());
        std::exit(1);
    }
    std::printf("wrote %s (%zu bytes)\n", (dir / name).string().c_str(), text.size());
}

void emit_backend(const std::filesystem::path& dir, const groups::Backend& backend,
                  const std::string& suffix, std::uint64_t seed) {
    Rng rng(seed);
    auto su = scheme::setup(backend, {"Doctor", "Professor", "Student"}, rng);
    auto retained = scheme::keygen_retained(su.msk, su.pk, {"Doctor", "Professor"}, rng);
    auto key = scheme::random_symmetric_key(backend, rng);
    auto ct = scheme::encrypt(su.pk, policy::parse_policy("(Doctor AND Professor)"), key, rng);
    auto sealed = scheme::dem_seal(scheme::kdf(key), to_bytes("golden payload"));

    auto beta = backend.random_nonzero_scalar(rng);
    auto cdk = scheme::issue_crossdomain_key(backend, beta, {"Doctor", "Student"});
    envelope::CrossDomainEnvelope cenv{cdk, backend.dual_generator().pow(beta)};
    auto rk = scheme::rekeygen(retained, cenv.registration, su.pk, rng);
    auto rct = scheme::reencrypt_corrected(su.msk, su.pk, cenv.registration.g2_part, ct,
                                           policy::parse_policy("(Doctor AND Student)"), rng);

    write(dir, "pk_" + suffix + ".env", envelope::encode_pk(su.pk));
    write(dir, "msk_" + suffix + ".env", envelope::encode_msk(su.msk));
    write(dir, "usk_" + suffix + ".env", envelope::encode_usk(retained.key));
    write(dir, "usk_retained_" + suffix + ".env", envelope::encode_usk_retained(retained));
    write(dir, "ct_" + suffix + ".env", envelope::encode_ct(ct, sealed));
    write(dir, "rk_" + suffix + ".env", envelope::encode_rk(rk));
    write(dir, "rct_" + suffix + ".env", envelope::encode_rct(rct, sealed));
    write(dir, "cdk_" + suffix + ".env", envelope::encode_cdk(cenv));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: %s <output-dir>\n", argv[0]);
        return 1;
    }
    std::filesystem::path dir(argv[1]);
    std::filesystem::create_directories(dir);
    emit_backend(dir, groups::Backend::debug_backend(), "debug", 1001);
    emit_backend(dir, groups::Backend::curve_backend(), "curve", 2001);
    write(dir, "bench_markdown.golden",
          bench::emit_table(testsupport::synthetic_report(), bench::TableFormat::markdown));
    return 0;
}
