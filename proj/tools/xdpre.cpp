#include "xdpre/bench.hpp"
#include "xdpre/envelope.hpp"
#include "xdpre/errors.hpp"
#include "xdpre/sites.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

using namespace xdpre;
using groups::Backend;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DecodeError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Bytes read_bytes(const std::string& path) {
    std::string s = read_file(path);
    return Bytes(s.begin(), s.end());
}

void write_file(const std::string& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidParameter("cannot write " + path);
    out.write(data.data(), std::streamsize(data.size()));
    if (!out) throw InvalidParameter("cannot write " + path);
}

void write_bytes(const std::string& path, BytesView data) {
    write_file(path, std::string_view(reinterpret_cast<const char*>(data.data()), data.size()));
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (std::uint64_t(rd()) << 32) ^ rd();
}

// Flags shared by every command.
struct Common {
    std::string backend_name = "debug";
    std::uint32_t prime = 101;
    std::uint64_t seed = 0;
    CLI::Option* backend_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* cmd, Common& c) {
    c.backend_opt = cmd->add_option("--backend", c.backend_name, "group backend")
                        ->check(CLI::IsMember({"debug", "curve"}));
    cmd->add_option("--debug-prime", c.prime, "debug backend modulus (odd prime < 2^32)");
    c.seed_opt = cmd->add_option("--seed", c.seed, "rng seed (defaults to OS entropy)");
}

Backend make_backend(const Common& c) {
    return c.backend_name == "curve" ? Backend::curve_backend()
                                     : Backend::debug_backend(c.prime);
}

std::uint64_t resolve_seed(const Common& c) {
    return c.seed_opt->count() ? c.seed : entropy_seed();
}

// Envelope-driven commands take the backend from the file; an explicit
// --backend must agree with it.
void check_backend_flag(const Common& c, const Backend& actual) {
    if (!c.backend_opt->count()) return;
    if (!(make_backend(c) == actual))
        throw BackendMismatch("--backend does not match the envelope backend");
}

std::set<std::string> attr_set(const std::string& csv) {
    auto parts = split_csv(csv);
    return std::set<std::string>(parts.begin(), parts.end());
}

std::vector<std::string> policy_leaves(const policy::PolicyNode& node) {
    std::set<std::string> names;
    std::vector<const policy::PolicyNode*> stack{&node};
    while (!stack.empty()) {
        const policy::PolicyNode* n = stack.back();
        stack.pop_back();
        if (n->is_leaf()) names.insert(n->name);
        for (const auto& ch : n->children) stack.push_back(&ch);
    }
    return std::vector<std::string>(names.begin(), names.end());
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty())
        std::fputs(text.c_str(), stdout);
    else
        write_file(out, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cross-domain attribute-based proxy re-encryption toolkit"};
    app.require_subcommand(1);

    // setup
    Common setup_c;
    std::string setup_attrs, setup_out_pk, setup_out_msk;
    auto* cmd_setup = app.add_subcommand("setup", "generate domain keys over a universe");
    add_common(cmd_setup, setup_c);
    cmd_setup->add_option("--attrs", setup_attrs, "comma-separated attribute universe")
        ->required();
    cmd_setup->add_option("--out-pk", setup_out_pk, "public key envelope path")->required();
    cmd_setup->add_option("--out-msk", setup_out_msk, "master key envelope path")->required();
    cmd_setup->callback([&] {
        Backend backend = make_backend(setup_c);
        Rng rng(resolve_seed(setup_c));
        scheme::SetupResult su = scheme::setup(backend, split_csv(setup_attrs), rng);
        write_file(setup_out_pk, envelope::encode_pk(su.pk));
        write_file(setup_out_msk, envelope::encode_msk(su.msk));
    });

    // keygen
    Common keygen_c;
    std::string keygen_pk, keygen_msk, keygen_attrs, keygen_out;
    bool keygen_retain = false, keygen_cross = false;
    auto* cmd_keygen = app.add_subcommand("keygen", "issue a user key");
    add_common(cmd_keygen, keygen_c);
    cmd_keygen->add_option("--pk", keygen_pk, "public key envelope");
    cmd_keygen->add_option("--msk", keygen_msk, "master key envelope");
    cmd_keygen->add_option("--attrs", keygen_attrs, "comma-separated attributes")->required();
    cmd_keygen->add_option("--out", keygen_out, "output envelope path")->required();
    cmd_keygen->add_flag("--retain", keygen_retain,
                         "keep the key-generation scalars for later rekeygen");
    cmd_keygen->add_flag("--crossdomain", keygen_cross,
                         "issue a cross-domain key instead of a domain key");
    cmd_keygen->callback([&] {
        Rng rng(resolve_seed(keygen_c));
        if (keygen_cross) {
            Backend backend = make_backend(keygen_c);
            groups::Scalar beta = backend.random_nonzero_scalar(rng);
            scheme::CrossDomainUserKey cdk =
                scheme::issue_crossdomain_key(backend, beta, attr_set(keygen_attrs));
            envelope::CrossDomainEnvelope env{std::move(cdk),
                                              backend.dual_generator().pow(beta)};
            write_file(keygen_out, envelope::encode_cdk(env));
            return;
        }
        if (keygen_pk.empty()) throw CLI::RequiredError("keygen --pk");
        if (keygen_msk.empty()) throw CLI::RequiredError("keygen --msk");
        scheme::PublicKey pk = envelope::decode_pk(read_file(keygen_pk));
        check_backend_flag(keygen_c, pk.backend);
        scheme::MasterSecretKey msk = envelope::decode_msk(read_file(keygen_msk));
        if (keygen_retain) {
            scheme::RetainedUserKey key =
                scheme::keygen_retained(msk, pk, attr_set(keygen_attrs), rng);
            write_file(keygen_out, envelope::encode_usk_retained(key));
        } else {
            scheme::UserSecretKey key = scheme::keygen(msk, pk, attr_set(keygen_attrs), rng);
            write_file(keygen_out, envelope::encode_usk(key));
        }
    });

    // encrypt
    Common enc_c;
    std::string enc_pk, enc_policy, enc_in, enc_out;
    bool enc_dump = false;
    auto* cmd_enc = app.add_subcommand("encrypt", "seal a payload under a policy");
    add_common(cmd_enc, enc_c);
    cmd_enc->add_option("--pk", enc_pk, "public key envelope")->required();
    cmd_enc->add_option("--policy", enc_policy, "access policy")->required();
    cmd_enc->add_option("--in", enc_in, "payload file")->required();
    cmd_enc->add_option("--out", enc_out, "ciphertext envelope path")->required();
    cmd_enc->add_flag("--dump-matrix", enc_dump, "print the compiled access matrix");
    cmd_enc->callback([&] {
        scheme::PublicKey pk = envelope::decode_pk(read_file(enc_pk));
        check_backend_flag(enc_c, pk.backend);
        Rng rng(resolve_seed(enc_c));
        policy::PolicyNode pol = policy::parse_policy(enc_policy);
        scheme::SymmetricKey key = scheme::random_symmetric_key(pk.backend, rng);
        scheme::Ciphertext ct = scheme::encrypt(pk, pol, key, rng);
        Bytes sealed = scheme::dem_seal(scheme::kdf(key), read_bytes(enc_in));
        if (enc_dump) std::fputs(policy::dump_matrix(ct.matrix).c_str(), stdout);
        write_file(enc_out, envelope::encode_ct(ct, sealed));
    });

    // decrypt
    Common dec_c;
    std::string dec_pk, dec_key, dec_ct, dec_out;
    auto* cmd_dec = app.add_subcommand("decrypt", "open a ciphertext with a domain key");
    add_common(cmd_dec, dec_c);
    cmd_dec->add_option("--pk", dec_pk, "public key envelope")->required();
    cmd_dec->add_option("--key", dec_key, "user key envelope")->required();
    cmd_dec->add_option("--ct", dec_ct, "ciphertext envelope")->required();
    cmd_dec->add_option("--out", dec_out, "payload output path")->required();
    cmd_dec->callback([&] {
        scheme::PublicKey pk = envelope::decode_pk(read_file(dec_pk));
        check_backend_flag(dec_c, pk.backend);
        scheme::UserSecretKey usk = envelope::decode_usk(read_file(dec_key));
        envelope::SealedCiphertext sct = envelope::decode_ct(read_file(dec_ct));
        if (!sct.sealed)
            throw MalformedCiphertext("ciphertext envelope carries no sealed payload");
        scheme::SymmetricKey key = scheme::decrypt(pk, usk, sct.ct);
        write_bytes(dec_out, scheme::dem_open(scheme::kdf(key), *sct.sealed));
    });

    // rekeygen
    Common rkg_c;
    std::string rkg_pk, rkg_key, rkg_target, rkg_out;
    auto* cmd_rkg = app.add_subcommand("rekeygen", "derive a re-encryption key");
    add_common(cmd_rkg, rkg_c);
    cmd_rkg->add_option("--pk", rkg_pk, "public key envelope")->required();
    cmd_rkg->add_option("--key", rkg_key, "retained user key envelope")->required();
    cmd_rkg->add_option("--target", rkg_target, "target cross-domain key envelope")
        ->required();
    cmd_rkg->add_option("--out", rkg_out, "re-encryption key envelope path")->required();
    cmd_rkg->callback([&] {
        scheme::PublicKey pk = envelope::decode_pk(read_file(rkg_pk));
        check_backend_flag(rkg_c, pk.backend);
        scheme::RetainedUserKey retained = envelope::decode_usk_retained(read_file(rkg_key));
        envelope::CrossDomainEnvelope target = envelope::decode_cdk(read_file(rkg_target));
        Rng rng(resolve_seed(rkg_c));
        scheme::ReKey rk = scheme::rekeygen(retained, target.registration, pk, rng);
        write_file(rkg_out, envelope::encode_rk(rk));
    });

    // reencrypt
    Common ren_c;
    std::string ren_pk, ren_ct, ren_policy, ren_out, ren_msk, ren_target, ren_rk;
    std::string ren_mode = "corrected";
    auto* cmd_ren = app.add_subcommand("reencrypt", "transform a ciphertext for a new policy");
    add_common(cmd_ren, ren_c);
    cmd_ren->add_option("--pk", ren_pk, "public key envelope")->required();
    cmd_ren->add_option("--ct", ren_ct, "ciphertext envelope")->required();
    cmd_ren->add_option("--policy", ren_policy, "target access policy")->required();
    cmd_ren->add_option("--out", ren_out, "re-encrypted envelope path")->required();
    cmd_ren->add_option("--mode", ren_mode, "legacy or corrected")
        ->check(CLI::IsMember({"legacy", "corrected"}));
    cmd_ren->add_option("--msk", ren_msk, "master key envelope (corrected mode)");
    cmd_ren->add_option("--target", ren_target, "target cross-domain key envelope (corrected)");
    cmd_ren->add_option("--rk", ren_rk, "re-encryption key envelope (legacy mode)");
    cmd_ren->callback([&] {
        scheme::PublicKey pk = envelope::decode_pk(read_file(ren_pk));
        check_backend_flag(ren_c, pk.backend);
        envelope::SealedCiphertext sct = envelope::decode_ct(read_file(ren_ct));
        policy::PolicyNode pol = policy::parse_policy(ren_policy);
        Rng rng(resolve_seed(ren_c));
        if (ren_mode == "legacy") {
            if (ren_rk.empty()) throw CLI::RequiredError("reencrypt --rk");
            scheme::ReKey rk = envelope::decode_rk(read_file(ren_rk));
            scheme::ReEncryptedCiphertext rct =
                scheme::reencrypt_legacy(pk, rk, sct.ct, pol, rng);
            write_file(ren_out, envelope::encode_rct(rct, sct.sealed));
        } else {
            if (ren_msk.empty()) throw CLI::RequiredError("reencrypt --msk");
            if (ren_target.empty()) throw CLI::RequiredError("reencrypt --target");
            scheme::MasterSecretKey msk = envelope::decode_msk(read_file(ren_msk));
            envelope::CrossDomainEnvelope target =
                envelope::decode_cdk(read_file(ren_target));
            scheme::ReEncryptedCiphertext rct = scheme::reencrypt_corrected(
                msk, pk, target.registration.g2_part, sct.ct, pol, rng);
            write_file(ren_out, envelope::encode_rct(rct, sct.sealed));
        }
    });

    // decrypt-re
    Common dre_c;
    std::string dre_key, dre_rct, dre_out;
    auto* cmd_dre = app.add_subcommand("decrypt-re", "open a re-encrypted ciphertext");
    add_common(cmd_dre, dre_c);
    cmd_dre->add_option("--key", dre_key, "cross-domain key envelope")->required();
    cmd_dre->add_option("--rct", dre_rct, "re-encrypted envelope")->required();
    cmd_dre->add_option("--out", dre_out, "payload output path")->required();
    cmd_dre->callback([&] {
        envelope::CrossDomainEnvelope cdk = envelope::decode_cdk(read_file(dre_key));
        check_backend_flag(dre_c, groups::backend_of(cdk.key.k0));
        envelope::SealedReEncrypted srct = envelope::decode_rct(read_file(dre_rct));
        if (!srct.sealed)
            throw MalformedCiphertext("re-encrypted envelope carries no sealed payload");
        scheme::SymmetricKey key = scheme::decrypt_reencrypted(cdk.key, srct.ct);
        write_bytes(dre_out, scheme::dem_open(scheme::kdf(key), *srct.sealed));
    });

    // game
    Common game_c;
    std::size_t game_trials = 1000;
    std::string game_policy = "(Doctor AND Professor AND Researcher)";
    std::string game_universe, game_m0 = "OISP Symposium", game_m1;
    std::string game_strategy = "random-guess", game_out;
    CLI::Option* game_m1_opt = nullptr;
    auto* cmd_game = app.add_subcommand("game", "run the distinguishing game");
    add_common(cmd_game, game_c);
    cmd_game->add_option("--trials", game_trials, "round count");
    cmd_game->add_option("--policy", game_policy, "challenge policy");
    cmd_game->add_option("--universe", game_universe,
                         "comma-separated universe (defaults to the policy attributes)");
    cmd_game->add_option("--m0", game_m0, "first challenge message");
    game_m1_opt = cmd_game->add_option("--m1", game_m1,
                                       "second challenge message (defaults to m0 XOR 0x55)");
    cmd_game->add_option("--strategy", game_strategy, "adversary strategy")
        ->check(CLI::IsMember({"random-guess", "constant-zero"}));
    cmd_game->add_option("--out", game_out, "also write the stats JSON here");
    cmd_game->callback([&] {
        Backend backend = make_backend(game_c);
        policy::PolicyNode pol = policy::parse_policy(game_policy);
        std::vector<std::string> universe =
            game_universe.empty() ? policy_leaves(pol) : split_csv(game_universe);
        Bytes m0 = to_bytes(game_m0);
        Bytes m1;
        if (game_m1_opt->count()) {
            m1 = to_bytes(game_m1);
        } else {
            m1 = m0;
            for (auto& b : m1) b ^= 0x55;
        }
        indcpa::GameConfig config{game_trials,
                                  backend,
                                  std::move(universe),
                                  std::move(pol),
                                  std::move(m0),
                                  std::move(m1),
                                  game_strategy == "constant-zero" ? indcpa::constant_zero()
                                                                   : indcpa::random_guess(),
                                  resolve_seed(game_c)};
        indcpa::GameStats stats = indcpa::run_game(config);
        json j{{"trials", stats.trials},        {"wins", stats.wins},
               {"win_rate", stats.win_rate},    {"advantage", stats.advantage},
               {"real_fraction", stats.real_fraction}, {"seed", stats.seed}};
        std::string text = j.dump() + "\n";
        std::fputs(text.c_str(), stdout);
        if (!game_out.empty()) write_file(game_out, text);
    });

    // bench
    Common bench_c;
    std::size_t bench_samples = 10;
    std::string bench_trials = "1000,1500,2000";
    std::string bench_format = "markdown", bench_out, bench_env;
    auto* cmd_bench = app.add_subcommand("bench", "run the timing suite");
    add_common(cmd_bench, bench_c);
    cmd_bench->add_option("--samples", bench_samples, "timed samples per cell");
    cmd_bench->add_option("--trials", bench_trials, "comma-separated trial counts");
    cmd_bench->add_option("--format", bench_format, "table format")
        ->check(CLI::IsMember({"markdown", "csv"}));
    cmd_bench->add_option("--out", bench_out, "write the table here instead of stdout");
    cmd_bench->add_option("--environment", bench_env, "override the environment note");
    cmd_bench->callback([&] {
        bench::BenchConfig config = bench::default_config(make_backend(bench_c));
        config.samples = bench_samples;
        config.seed = resolve_seed(bench_c);
        config.environment = bench_env;
        config.trial_counts.clear();
        for (const auto& part : split_csv(bench_trials))
            config.trial_counts.push_back(std::stoull(part));
        bench::BenchReport report = bench::run_suite(config);
        emit(bench_out, bench::emit_table(report, bench_format == "csv"
                                                      ? bench::TableFormat::csv
                                                      : bench::TableFormat::markdown));
    });

    // demo
    Common demo_c;
    std::string demo_what, demo_out;
    auto* cmd_demo = app.add_subcommand("demo", "run a scripted scenario");
    add_common(cmd_demo, demo_c);
    cmd_demo->add_option("what", demo_what, "scenario name (sites)")->required();
    cmd_demo->add_option("--out", demo_out, "write the event log here");
    cmd_demo->callback([&] {
        if (demo_what != "sites")
            throw CLI::ValidationError("demo", "unknown scenario " + demo_what);
        sites::DemoResult result =
            sites::run_demo_scenario(make_backend(demo_c), resolve_seed(demo_c));
        if (demo_out.empty()) {
            std::fputs(result.log.c_str(), stdout);
        } else {
            write_file(demo_out, result.log);
            json j{{"events", result.event_count},
                   {"violations", result.violations},
                   {"payload_recovered", result.recovered == result.payload}};
            std::fputs((j.dump() + "\n").c_str(), stdout);
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\n%s\n", e.name().c_str(), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }
    return 0;
}
