#include "xdpre/indcpa.hpp"

#include "xdpre/errors.hpp"

#include <utility>

namespace xdpre::indcpa {

using groups::Backend;

BdheChallenge sample_bdhe(const Backend& backend, std::size_t l, Rng& rng) {
    if (l < 1) throw InvalidParameter("challenge parameter l must be at least 1");
    bool is_real = coin(rng);
    groups::Scalar a = backend.random_nonzero_scalar(rng);
    groups::Scalar s = backend.random_nonzero_scalar(rng);
    // a^{l+1} in the exponent; the random branch hides nothing about a.
    groups::GTElem t = is_real ? backend.gt().pow(a.pow(l + 1)) : backend.random_gt(rng);
    return BdheChallenge{std::move(t), is_real, l, std::move(a), std::move(s)};
}

AdversaryStrategy random_guess() {
    return AdversaryStrategy{"random-guess",
                             [](StrategyContext& ctx) { return coin(ctx.rng) ? 1 : 0; }};
}

AdversaryStrategy constant_zero() {
    return AdversaryStrategy{"constant-zero", [](StrategyContext&) { return 0; }};
}

GameRound run_round(const RoundContext& ctx, const policy::PolicyNode& challenge_policy,
                    BytesView m0, BytesView m1, const AdversaryStrategy& strategy,
                    Rng& rng) {
    if (m0.size() != m1.size())
        throw LengthMismatch("challenge messages must have equal byte length");

    scheme::SetupResult su = scheme::setup(ctx.backend, ctx.universe, rng);
    policy::AccessMatrix matrix = policy::build_matrix(ctx.backend, challenge_policy);

    BdheChallenge bdhe = sample_bdhe(ctx.backend, matrix.rows(), rng);
    int b = coin(rng) ? 1 : 0;
    groups::Scalar v = ctx.backend.random_nonzero_scalar(rng);

    // A1p = M_b * T, A2p = h1^v = g1^{n v}.
    ChallengeCiphertext challenge{
        ctx.backend.encode_message(b ? m1 : m0) * bdhe.t,
        su.pk.h.g1_part.pow(v),
    };

    std::vector<OracleCall> transcript;
    KeygenOracle oracle =
        [&](const std::set<std::string>& attrs) -> std::optional<scheme::UserSecretKey> {
        bool satisfies = true;
        try {
            policy::satisfying_rows(matrix, attrs, true);
        } catch (const PolicyNotSatisfied&) {
            satisfies = false;
        }
        transcript.push_back(OracleCall{attrs, satisfies});
        if (satisfies) return std::nullopt;
        return scheme::keygen(su.msk, su.pk, attrs, rng);
    };

    StrategyContext sctx{su.pk, challenge, oracle, rng};
    int guess = strategy.guess(sctx) ? 1 : 0;

    return GameRound{b, guess, bdhe.is_real, std::move(challenge), std::move(transcript)};
}

GameStats run_game(const GameConfig& config) {
    if (config.trials < 1) throw InvalidParameter("game needs at least one trial");

    RoundContext ctx{config.backend, config.universe};
    std::size_t wins = 0;
    std::size_t real_rounds = 0;
    std::size_t real_wins = 0;
    std::size_t random_wins = 0;
    for (std::size_t i = 0; i < config.trials; ++i) {
        Rng round_rng(derive_seed(config.seed, i));
        GameRound round = run_round(ctx, config.challenge_policy, config.m0, config.m1,
                                    config.strategy, round_rng);
        wins += round.win();
        if (round.is_real) {
            ++real_rounds;
            real_wins += round.win();
        } else {
            random_wins += round.win();
        }
    }

    std::size_t random_rounds = config.trials - real_rounds;
    GameStats stats;
    stats.trials = config.trials;
    stats.wins = wins;
    stats.win_rate = double(wins) / double(config.trials);
    stats.advantage = stats.win_rate >= 0.5 ? stats.win_rate - 0.5 : 0.5 - stats.win_rate;
    stats.real_fraction = double(real_rounds) / double(config.trials);
    stats.win_rate_real = real_rounds ? double(real_wins) / double(real_rounds) : 0.0;
    stats.win_rate_random = random_rounds ? double(random_wins) / double(random_rounds) : 0.0;
    stats.seed = config.seed;
    return stats;
}

}  // namespace xdpre::indcpa
