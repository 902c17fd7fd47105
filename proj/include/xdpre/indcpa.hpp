#pragma once

#include "xdpre/policy.hpp"
#include "xdpre/scheme.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace xdpre::indcpa {

// Decisional challenge element: T = pair(g1,g2)^{a^{l+1}} when real,
// uniform in GT otherwise.  a and s never leave the challenger.
struct BdheChallenge {
    groups::GTElem t;
    bool is_real;
    std::size_t l;
    groups::Scalar a;
    groups::Scalar s;
};

// l < 1 -> InvalidParameter.
BdheChallenge sample_bdhe(const groups::Backend& backend, std::size_t l, Rng& rng);

// The two elements handed to the adversary: A1p = encode(m_b) * T and
// A2p = g1^{n v}.  Nothing else in a round depends on the challenge bit.
struct ChallengeCiphertext {
    groups::GTElem a1p;
    groups::G1Elem a2p;
};

struct OracleCall {
    std::set<std::string> attrs;
    bool refused = false;
};

// Key-generation oracle handed to the adversary.  Returns a key unless the
// queried set satisfies the challenge policy, in which case it refuses
// (nullopt) and the refusal is recorded in the round transcript.
using KeygenOracle =
    std::function<std::optional<scheme::UserSecretKey>(const std::set<std::string>&)>;

// Everything the adversary is allowed to see.
struct StrategyContext {
    const scheme::PublicKey& pk;
    const ChallengeCiphertext& challenge;
    const KeygenOracle& oracle;
    Rng& rng;
};

struct AdversaryStrategy {
    std::string name;
    std::function<int(StrategyContext&)> guess;
};

AdversaryStrategy random_guess();
AdversaryStrategy constant_zero();

struct GameRound {
    int challenge_bit;
    int adversary_guess;
    bool is_real;
    ChallengeCiphertext challenge;
    std::vector<OracleCall> transcript;

    bool win() const { return adversary_guess == challenge_bit; }
};

struct RoundContext {
    groups::Backend backend;
    std::vector<std::string> universe;
};

// One game round: setup, challenge embedding, adversary guess.
// |m0| != |m1| -> LengthMismatch.
GameRound run_round(const RoundContext& ctx, const policy::PolicyNode& challenge_policy,
                    BytesView m0, BytesView m1, const AdversaryStrategy& strategy,
                    Rng& rng);

struct GameConfig {
    std::size_t trials;
    groups::Backend backend;
    std::vector<std::string> universe;
    policy::PolicyNode challenge_policy;
    Bytes m0;
    Bytes m1;
    AdversaryStrategy strategy;
    std::uint64_t seed = 0;
};

struct GameStats {
    std::size_t trials = 0;
    std::size_t wins = 0;
    double win_rate = 0.0;
    double advantage = 0.0;
    double real_fraction = 0.0;
    double win_rate_real = 0.0;
    double win_rate_random = 0.0;
    std::uint64_t seed = 0;
};

// Independent rounds, round i seeded from derive_seed(config.seed, i).
// trials < 1 -> InvalidParameter.
GameStats run_game(const GameConfig& config);

}  // namespace xdpre::indcpa
