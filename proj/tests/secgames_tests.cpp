#include <string>

#include "cps/secgames.hpp"
#include "doctest.h"
#include "support/temp_dir.hpp"

using namespace cps;
using namespace cps::secgames;
using bilinear::Group;
using bilinear::Params;

namespace {

// Queries the signing oracle straight away; the game is expected to abort.
struct AbortingOsAdversary : OsAdversary {
    std::optional<OsForgery> run(OsGameView& v, RandomSource&) override {
        Bytes msg = to_bytes("abort-me");
        v.query_h(msg);
        v.query_os(msg);
        FAIL("the signing oracle must abort on the guessed index");
        return std::nullopt;
    }
};

struct AbortingPsAdversary : PsAdversary {
    std::optional<PsForgery> run(PsGameView& v, RandomSource&) override {
        Bytes msg = to_bytes("abort-me");
        v.query_h(msg);  // index 2: first message past the published entry
        v.query_ps(msg);
        FAIL("the collision oracle must abort on the guessed index");
        return std::nullopt;
    }
};

uint64_t dlog(const Params& p, const bilinear::GroupElement& e) {
    return p.discrete_log(e).get_ui();
}

}  // namespace

TEST_SUITE("secgames") {

TEST_CASE("product game: cheating forgery extracts the instance solution") {
    Params p = Params::transparent(1009);
    DeterministicRandom rng(0x05ec);
    Instance inst = make_instance(p, p.scalar_from_u64(7), p.scalar_from_u64(11));

    CheatingOsAdversary adv(p.scalar_from_u64(7), 3, 4);
    GameConfig cfg;
    cfg.q_h = 16;
    cfg.guess = {{3, 4}};
    GameResult res = run_os_euf_simulation(p, inst, adv, rng, cfg);

    REQUIRE(res.outcome == Outcome::kSolved);
    REQUIRE(res.solution.has_value());
    CHECK(dlog(p, *res.solution) == 77);  // 7 * 11 mod 1009
    CHECK(p.eq(*res.solution,
               p.pow(p.generator(Group::kG), p.scalar_from_u64(77))));
    CHECK(res.tables.j == 3);
    CHECK(res.tables.w == 4);
    CHECK(res.h_queries == 3);
    CHECK(res.ch_queries == 4);
    CHECK(res.sign_queries == 0);

    SweepResult sweep = verify_os_answers(p, res.pk_a, res.pk_b, res.tables);
    CHECK(sweep.checked == 0);  // it never used the signing oracle
}

TEST_CASE("product game: every signing answer verifies under the programmed hash") {
    Params p = Params::transparent(1009);
    DeterministicRandom rng(0xa11);
    Instance inst = random_instance(p, rng);

    HonestOsAdversary adv(10, 3, 10);
    GameConfig cfg;
    cfg.q_h = 128;
    cfg.guess = {{128, 127}};  // out of the honest adversary's reach
    GameResult res = run_os_euf_simulation(p, inst, adv, rng, cfg);

    CHECK(res.outcome == Outcome::kNoForgery);
    CHECK_FALSE(res.solution.has_value());
    CHECK(res.h_queries == 10);
    CHECK(res.ch_queries == 30);
    CHECK(res.sign_queries == 100);

    SweepResult sweep = verify_os_answers(p, res.pk_a, res.pk_b, res.tables);
    CHECK(sweep.checked == 100);
    CHECK(sweep.passed == 100);

    // Programmed hash entries are internally consistent off the guessed
    // index: m_i = g^t_i.
    for (size_t i = 0; i < res.tables.h_order.size(); ++i) {
        if (i + 1 == res.tables.j) continue;
        const HashEntry& he = res.tables.l_h.at(res.tables.h_order[i]);
        CHECK(p.eq(he.m, p.pow(p.generator(Group::kG), he.t)));
    }
}

TEST_CASE("product game: the guessed signing query aborts without leaking") {
    Params p = Params::transparent(1009);
    DeterministicRandom rng(0xab0);
    Instance inst = random_instance(p, rng);

    AbortingOsAdversary adv;
    GameConfig cfg;
    cfg.guess = {{1, 5}};
    GameResult res = run_os_euf_simulation(p, inst, adv, rng, cfg);

    CHECK(res.outcome == Outcome::kAborted);
    CHECK_FALSE(res.solution.has_value());
    CHECK(res.detail.find("index 1") != std::string::npos);
    CHECK(res.tables.l_os.empty());  // the aborted answer was never written
    CHECK(res.sign_queries == 1);
}

TEST_CASE("product game: a valid forgery off the guesses solves nothing") {
    Params p = Params::transparent(1009);
    DeterministicRandom rng(0x2bad);
    Instance inst = make_instance(p, p.scalar_from_u64(7), p.scalar_from_u64(11));

    // The forgery lands at hash index 3, but the simulator guessed 2.
    CheatingOsAdversary adv(p.scalar_from_u64(7), 3, 4);
    GameConfig cfg;
    cfg.q_h = 16;
    cfg.guess = {{2, 4}};
    GameResult res = run_os_euf_simulation(p, inst, adv, rng, cfg);

    CHECK(res.outcome == Outcome::kWrongGuess);
    CHECK_FALSE(res.solution.has_value());
    CHECK(res.detail.find("hash index") != std::string::npos);
}

TEST_CASE("quotient game: cheating forgery extracts the quotient") {
    Params p = Params::transparent(23);
    DeterministicRandom rng(0x95);
    Instance inst = make_instance(p, p.scalar_from_u64(3), p.scalar_from_u64(4));

    CheatingPsAdversary adv(p.scalar_from_u64(4), 2);
    GameConfig cfg;
    cfg.q_h = 8;
    cfg.guess = {{2, 0}};
    GameResult res = run_ps_euf_simulation(p, inst, adv, rng, cfg);

    REQUIRE(res.outcome == Outcome::kSolved);
    REQUIRE(res.solution.has_value());
    CHECK(dlog(p, *res.solution) == 18);  // 3 * inverse(4) = 3 * 6 mod 23
    CHECK(res.h_queries == 1);
    CHECK(res.sign_queries == 0);
    CHECK(res.tables.j == 2);
    CHECK(res.tables.w == 0);  // the quotient game guesses one index only
}

TEST_CASE("quotient game: published signature and all answers verify") {
    Params p = Params::transparent(1009);
    DeterministicRandom rng(0x9e1f);
    Instance inst = random_instance(p, rng);

    HonestPsAdversary adv(12);
    GameConfig cfg;
    cfg.q_h = 64;
    cfg.guess = {{64, 0}};  // out of the honest adversary's reach
    GameResult res = run_ps_euf_simulation(p, inst, adv, rng, cfg);

    CHECK(res.outcome == Outcome::kNoForgery);
    REQUIRE(res.ps_init.has_value());
    const PsInit& init = *res.ps_init;

    // The published original signature verifies under the programmed hash.
    const bilinear::GroupElement& m0 = res.tables.l_h.at(init.M).m;
    CHECK(pver_under_oracle(p, init.pk_a, init.sigma_a, init.h_b, m0, init.R,
                            init.pk_b));

    // Every collision answer (the published one included) verifies too.
    SweepResult sweep = verify_ps_answers(p, init, res.tables);
    CHECK(sweep.checked == 13);  // 12 fresh + the published pair
    CHECK(sweep.passed == 13);
    // One collision query replayed the published message from the list.
    CHECK(res.sign_queries == 13);
    CHECK(res.h_queries == 12);
}

TEST_CASE("quotient game: replaying an oracle answer is not a forgery") {
    Params p = Params::transparent(1009);
    DeterministicRandom rng(0x3e91);
    Instance inst = random_instance(p, rng);

    ReplayPsAdversary adv;
    GameConfig cfg;
    cfg.guess = {{5, 0}};
    GameResult res = run_ps_euf_simulation(p, inst, adv, rng, cfg);

    CHECK(res.outcome == Outcome::kForgeryRejected);
    CHECK(res.detail.find("collision-oracle answer") != std::string::npos);
    CHECK_FALSE(res.solution.has_value());
}

TEST_CASE("quotient game: the guessed collision query aborts without leaking") {
    Params p = Params::transparent(1009);
    DeterministicRandom rng(0xab1);
    Instance inst = random_instance(p, rng);

    AbortingPsAdversary adv;
    GameConfig cfg;
    cfg.guess = {{2, 0}};
    GameResult res = run_ps_euf_simulation(p, inst, adv, rng, cfg);

    CHECK(res.outcome == Outcome::kAborted);
    CHECK(res.detail.find("index 2") != std::string::npos);
    CHECK(res.tables.l_ps.size() == 1);  // only the published pair remains
}

TEST_CASE("games demand the transparent backend") {
    Params p = Params::production();
    DeterministicRandom rng(0xbad);
    Params toy = Params::transparent(23);
    Instance inst = make_instance(toy, toy.scalar_from_u64(3),
                                  toy.scalar_from_u64(4));
    HonestOsAdversary os_adv(1, 1, 1);
    HonestPsAdversary ps_adv(1);
    CHECK_THROWS_AS(run_os_euf_simulation(p, inst, os_adv, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_ps_euf_simulation(p, inst, ps_adv, rng),
                    std::invalid_argument);
}

TEST_CASE("false accusations bounce off the tracer") {
    Params p = Params::production();
    TempDir dir;
    DeterministicRandom rng(0xacc5);
    registry::Config cfg;
    cfg.ledger_path = dir.file("ledger.bin");
    cfg.trusted_store_path = dir.file("trusted.bin");
    cfg.idp_key_path = dir.file("idp.key");
    cfg.authority_token = "tracer-token";
    registry::Registry reg(p, cfg, rng);

    AccusationTarget target = make_accusation_target(p, reg, rng);

    // Sanity: the honest evidence itself traces back to the framed user.
    protocol::Tracer tracer(p, reg, cfg.authority_token);
    protocol::TraceEvidence honest{
        target.avatar, target.transcript,
        protocol::transcript_digest(target.transcript.messages,
                                    target.transcript.messages.size())};
    CHECK(tracer.trace(honest).manipulator.rid == target.user_id.rid);

    SUBCASE("case 1: forged description on the honest human-driven avatar") {
        AccusationResult res =
            false_accusation_case1(p, reg, cfg.authority_token, target, 25, rng);
        CHECK(res.attempts == 25);
        CHECK(res.rejected == 25);
        CHECK(res.rejection_rate() == 1.0);
        CHECK_FALSE(res.vacuous);
        REQUIRE(res.reject_reasons.count("bad-signature"));
        CHECK(res.reject_reasons.at("bad-signature") == 25);
    }

    SUBCASE("case 2: colluding proxy cannot supply the delegator's component") {
        AccusationResult res =
            false_accusation_case2(p, reg, cfg.authority_token, target, 25, rng);
        CHECK(res.attempts == 25);
        CHECK(res.rejected == 25);
        CHECK(res.rejection_rate() == 1.0);
        REQUIRE(res.reject_reasons.count("bad-signature"));
        CHECK(res.reject_reasons.at("bad-signature") == 25);
    }

    SUBCASE("zero attempts is a vacuous pass with a warning") {
        AccusationResult res =
            false_accusation_case1(p, reg, cfg.authority_token, target, 0, rng);
        CHECK(res.vacuous);
        CHECK(res.rejection_rate() == 1.0);
        CHECK_FALSE(res.warning.empty());
        CHECK(res.rejected == 0);
    }
}

}  // TEST_SUITE
