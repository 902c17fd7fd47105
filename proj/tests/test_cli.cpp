// Drives the installed binary through a shell and checks that it is a thin
// wrapper: identical envelopes to direct library calls under the same seed.
#include "xdpre/envelope.hpp"
#include "xdpre/indcpa.hpp"
#include "xdpre/policy.hpp"
#include "xdpre/rng.hpp"
#include "xdpre/scheme.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef XDPRE_CLI_PATH
#error "XDPRE_CLI_PATH must point at the binary"
#endif

namespace {

namespace fs = std::filesystem;
using namespace xdpre;

struct RunResult {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing " << p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path workdir() {
    static fs::path dir = [] {
        auto d = fs::temp_directory_path() / "xdpre_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run(const std::string& args) {
    auto dir = workdir();
    auto out = dir / "stdout.txt";
    auto err = dir / "stderr.txt";
    std::string cmd = std::string(XDPRE_CLI_PATH) + " " + args + " >" + out.string() + " 2>" +
                      err.string();
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string first_line(const std::string& s) {
    auto nl = s.find('\n');
    return nl == std::string::npos ? s : s.substr(0, nl);
}

// Shared fixture: domain keys, a user key, a sealed payload.
struct Domain {
    std::string pk = (workdir() / "pk.env").string();
    std::string msk = (workdir() / "msk.env").string();
    std::string usk = (workdir() / "usk.env").string();
    std::string payload = (workdir() / "payload.bin").string();
    std::string ct = (workdir() / "ct.env").string();

    Domain() {
        {
            std::ofstream f(payload, std::ios::binary);
            f << "attack at dawn";
        }
        REQUIRE(run("setup --attrs Doctor,Professor,Student --seed 11 --out-pk " + pk +
                    " --out-msk " + msk)
                    .status == 0);
        REQUIRE(run("keygen --pk " + pk + " --msk " + msk +
                    " --attrs Doctor,Professor --seed 12 --out " + usk)
                    .status == 0);
        REQUIRE(run("encrypt --pk " + pk + " --policy '(Doctor AND Professor)' --in " +
                    payload + " --seed 13 --out " + ct)
                    .status == 0);
    }
};

}  // namespace

TEST_CASE("setup/keygen/encrypt envelopes equal direct library calls") {
    Domain d;

    Rng srng(11);
    auto su = scheme::setup(groups::Backend::debug_backend(),
                            {"Doctor", "Professor", "Student"}, srng);
    CHECK(slurp(d.pk) == envelope::encode_pk(su.pk));
    CHECK(slurp(d.msk) == envelope::encode_msk(su.msk));

    Rng krng(12);
    auto usk = scheme::keygen(su.msk, su.pk, {"Doctor", "Professor"}, krng);
    CHECK(slurp(d.usk) == envelope::encode_usk(usk));

    Rng erng(13);
    auto pol = policy::parse_policy("(Doctor AND Professor)");
    auto key = scheme::random_symmetric_key(su.pk.backend, erng);
    auto ct = scheme::encrypt(su.pk, pol, key, erng);
    auto sealed = scheme::dem_seal(scheme::kdf(key), to_bytes("attack at dawn"));
    CHECK(slurp(d.ct) == envelope::encode_ct(ct, sealed));
}

TEST_CASE("decrypt recovers the payload and honors the policy") {
    Domain d;
    auto out = (workdir() / "plain.bin").string();
    auto ok = run("decrypt --pk " + d.pk + " --key " + d.usk + " --ct " + d.ct + " --out " +
                  out);
    CHECK(ok.status == 0);
    CHECK(slurp(out) == "attack at dawn");

    auto weak = (workdir() / "weak.env").string();
    REQUIRE(run("keygen --pk " + d.pk + " --msk " + d.msk +
                " --attrs Student --seed 14 --out " + weak)
                .status == 0);
    auto no = run("decrypt --pk " + d.pk + " --key " + weak + " --ct " + d.ct + " --out " +
                  out);
    CHECK(no.status == 1);
    CHECK(first_line(no.err) == "PolicyNotSatisfied");
}

TEST_CASE("crossdomain keygen and corrected reencrypt match the library") {
    Domain d;
    auto cdk = (workdir() / "cdk.env").string();
    auto rct = (workdir() / "rct.env").string();
    REQUIRE(run("keygen --crossdomain --attrs Doctor,Student --seed 21 --out " + cdk).status ==
            0);

    auto backend = groups::Backend::debug_backend();
    Rng crng(21);
    auto beta = backend.random_nonzero_scalar(crng);
    auto want_cdk = scheme::issue_crossdomain_key(backend, beta, {"Doctor", "Student"});
    envelope::CrossDomainEnvelope env{want_cdk, backend.dual_generator().pow(beta)};
    CHECK(slurp(cdk) == envelope::encode_cdk(env));

    auto r = run("reencrypt --pk " + d.pk + " --ct " + d.ct +
                 " --policy '(Doctor AND Student)' --msk " + d.msk + " --target " + cdk +
                 " --seed 22 --out " + rct);
    REQUIRE(r.status == 0);

    auto pk = envelope::decode_pk(slurp(d.pk));
    auto msk = envelope::decode_msk(slurp(d.msk));
    auto sct = envelope::decode_ct(slurp(d.ct));
    Rng rrng(22);
    auto pol2 = policy::parse_policy("(Doctor AND Student)");
    auto want = scheme::reencrypt_corrected(msk, pk, env.registration.g2_part, sct.ct, pol2,
                                            rrng);
    CHECK(slurp(rct) == envelope::encode_rct(want, sct.sealed));

    auto out = (workdir() / "cross.bin").string();
    auto open = run("decrypt-re --key " + cdk + " --rct " + rct + " --out " + out);
    CHECK(open.status == 0);
    CHECK(slurp(out) == "attack at dawn");
}

TEST_CASE("retained keygen, rekeygen and legacy reencrypt match the library") {
    Domain d;
    auto uskr = (workdir() / "uskr.env").string();
    auto cdk = (workdir() / "cdk2.env").string();
    auto rk = (workdir() / "rk.env").string();
    auto rct = (workdir() / "rct_legacy.env").string();
    REQUIRE(run("keygen --retain --pk " + d.pk + " --msk " + d.msk +
                " --attrs Doctor,Professor --seed 12 --out " + uskr)
                .status == 0);
    REQUIRE(run("keygen --crossdomain --attrs Doctor,Student --seed 21 --out " + cdk).status ==
            0);

    auto pk = envelope::decode_pk(slurp(d.pk));
    auto msk = envelope::decode_msk(slurp(d.msk));
    Rng krng(12);
    auto retained = scheme::keygen_retained(msk, pk, {"Doctor", "Professor"}, krng);
    CHECK(slurp(uskr) == envelope::encode_usk_retained(retained));

    REQUIRE(run("rekeygen --pk " + d.pk + " --key " + uskr + " --target " + cdk +
                " --seed 31 --out " + rk)
                .status == 0);
    auto target = envelope::decode_cdk(slurp(cdk));
    Rng rkrng(31);
    auto want_rk = scheme::rekeygen(retained, target.registration, pk, rkrng);
    CHECK(slurp(rk) == envelope::encode_rk(want_rk));

    auto r = run("reencrypt --mode legacy --pk " + d.pk + " --ct " + d.ct +
                 " --policy Doctor --rk " + rk + " --seed 32 --out " + rct);
    REQUIRE(r.status == 0);
    auto sct = envelope::decode_ct(slurp(d.ct));
    Rng rerng(32);
    auto want = scheme::reencrypt_legacy(pk, envelope::decode_rk(slurp(rk)), sct.ct,
                                         policy::parse_policy("Doctor"), rerng);
    CHECK(slurp(rct) == envelope::encode_rct(want, sct.sealed));

    auto out = (workdir() / "never.bin").string();
    auto open = run("decrypt-re --key " + cdk + " --rct " + rct + " --out " + out);
    CHECK(open.status == 1);
    CHECK(first_line(open.err) == "UnsupportedMode");
}

TEST_CASE("game subcommand reports the same statistics as run_game") {
    auto r = run("game --trials 120 --seed 77");
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(r.out);

    Bytes m0 = to_bytes("OISP Symposium");
    Bytes m1 = m0;
    for (auto& b : m1) b ^= 0x55;
    indcpa::GameConfig cfg{120,
                           groups::Backend::debug_backend(),
                           {"Doctor", "Professor", "Researcher"},
                           policy::parse_policy("(Doctor AND Professor AND Researcher)"),
                           std::move(m0),
                           std::move(m1),
                           indcpa::random_guess(),
                           77};
    auto stats = indcpa::run_game(cfg);
    CHECK(j.at("trials").get<std::size_t>() == stats.trials);
    CHECK(j.at("wins").get<std::size_t>() == stats.wins);
    CHECK(j.at("win_rate").get<double>() == doctest::Approx(stats.win_rate).epsilon(1e-12));
    CHECK(j.at("advantage").get<double>() == doctest::Approx(stats.advantage).epsilon(1e-12));
    CHECK(j.at("real_fraction").get<double>() ==
          doctest::Approx(stats.real_fraction).epsilon(1e-12));
    CHECK(j.at("seed").get<std::uint64_t>() == 77);
}

TEST_CASE("usage errors exit 2 and domain errors exit 1") {
    Domain d;
    CHECK(run("").status == 2);
    CHECK(run("frobnicate").status == 2);
    CHECK(run("setup --attrs A").status == 2);  // missing required outputs
    CHECK(run("--help").status == 0);
    CHECK(run("setup --help").status == 0);
    CHECK(run("reencrypt --mode legacy --pk " + d.pk + " --ct " + d.ct +
              " --policy Doctor --out x.env")
              .status == 2);  // --rk required in legacy mode

    auto bad = run("encrypt --pk " + d.pk + " --policy '(Doctor AND' --in " + d.payload +
                   " --seed 2 --out " + (workdir() / "x.env").string());
    CHECK(bad.status == 1);
    CHECK(first_line(bad.err) == "ParseError");

    auto missing = run("decrypt --pk " + d.pk + " --key " +
                       (workdir() / "nope.env").string() + " --ct " + d.ct + " --out " +
                       (workdir() / "y.bin").string());
    CHECK(missing.status == 1);
    CHECK(first_line(missing.err) == "DecodeError");

    auto mismatch = run("keygen --backend curve --pk " + d.pk + " --msk " + d.msk +
                        " --attrs Doctor --seed 3 --out " + (workdir() / "z.env").string());
    CHECK(mismatch.status == 1);
    CHECK(first_line(mismatch.err) == "BackendMismatch");

    auto wrong_env = run("keygen --pk " + d.msk + " --msk " + d.msk +
                         " --attrs Doctor --seed 3 --out " + (workdir() / "z.env").string());
    CHECK(wrong_env.status == 1);
    CHECK(first_line(wrong_env.err) == "DecodeError");
}

TEST_CASE("demo subcommand writes the audit log and a summary") {
    auto log = (workdir() / "demo.log").string();
    auto r = run("demo sites --seed 5 --out " + log);
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("violations").empty());
    CHECK(j.at("payload_recovered").get<bool>());
    CHECK(j.at("events").get<std::size_t>() > 0);
    CHECK(slurp(log).find("task_outsourced") != std::string::npos);

    CHECK(run("demo unknown").status == 2);

    // without --out the log itself streams to stdout
    auto direct = run("demo sites --seed 5");
    REQUIRE(direct.status == 0);
    CHECK(direct.out == slurp(log));
}
