#include <doctest.h>

#include <array>
#include <unordered_set>
#include <vector>

#include "cps/bilinear.hpp"
#include "cps/hash.hpp"
#include "support/gmp_oracle.hpp"

using namespace cps;
using namespace cps::bilinear;

namespace {

mpz_class digest_mod(BytesView msg, const mpz_class& q) {
    // independent recomputation of the transparent hash exponent
    Bytes buf = to_bytes("CPS-H-v1");
    buf.insert(buf.end(), msg.begin(), msg.end());
    Digest d = sha256(buf);
    mpz_class v;
    mpz_import(v.get_mpz_t(), d.size(), 1, 1, 1, 0, d.data());
    return v % q;
}

bool counters_equal(const OpCounters& a, const OpCounters& b) {
    return a.exps == b.exps && a.muls == b.muls && a.pairings == b.pairings &&
           a.aux.hash_to_group == b.aux.hash_to_group &&
           a.aux.scalar_inversions == b.aux.scalar_inversions &&
           a.aux.gt_compares == b.aux.gt_compares && a.aux.gt_ops == b.aux.gt_ops;
}

}  // namespace

TEST_SUITE_BEGIN("bilinear");

TEST_CASE("setup contracts") {
    Params toy = setup(128, Backend::kTransparent);
    CHECK(toy.order() == 1009);
    CHECK(toy.is_transparent());

    Params prod = setup(128, Backend::kProduction);
    CHECK_FALSE(prod.is_transparent());
    CHECK(mpz_sizeinbase(prod.order().get_mpz_t(), 2) == 255);
    CHECK(mpz_probab_prime_p(prod.order().get_mpz_t(), 30));

    CHECK_THROWS_AS(setup(64, Backend::kProduction), std::invalid_argument);
    CHECK_THROWS_AS(setup(256, Backend::kTransparent), std::invalid_argument);
    CHECK_THROWS_AS(Params::transparent(1000), std::invalid_argument);  // not prime

    // generators are not the identity
    for (const Params& p : {toy, prod})
        for (Group g : {Group::kG, Group::kGhat, Group::kGT})
            CHECK_FALSE(p.is_identity(p.generator(g)));
}

TEST_CASE("transparent backend is an exponent oracle") {
    Params p = Params::transparent(1009);
    auto g = p.generator(Group::kG);
    CHECK(p.discrete_log(g) == 1);
    CHECK(p.discrete_log(p.identity(Group::kG)) == 0);

    auto a6 = p.pow(g, p.scalar_from_u64(6));
    auto a4 = p.pow(g, p.scalar_from_u64(4));
    CHECK(p.discrete_log(a6) == 6);
    CHECK(p.discrete_log(p.mul(a6, a4)) == 10);
    CHECK(p.discrete_log(p.div(a6, a4)) == 2);
    CHECK(p.discrete_log(p.inverse(a4)) == 1005);

    // pairing multiplies exponents mod q
    auto gt24 = p.pair(a6, a4);
    CHECK(gt24.group() == Group::kGT);
    CHECK(p.discrete_log(gt24) == 24);
    CHECK(p.eq(gt24, p.pow(p.generator(Group::kGT), p.scalar_from_u64(24))));
    CHECK(p.is_identity(p.pair(a6, p.identity(Group::kGhat))));

    // the toy pairing is symmetric: either source group in either slot
    auto ghat3 = p.pow(p.generator(Group::kGhat), p.scalar_from_u64(3));
    CHECK(p.discrete_log(p.pair(a6, ghat3)) == 18);

    CHECK(p.is_identity(p.pow(g, p.scalar_from_u64(0))));
}

TEST_CASE("production backend hides discrete logs") {
    Params p = Params::production();
    CHECK_THROWS_AS(p.discrete_log(p.generator(Group::kG)), std::logic_error);
    CHECK(p.is_identity(p.pow(p.generator(Group::kG), p.scalar_from_u64(0))));
    // gt generator is pair(g, ghat)
    CHECK(p.eq(p.generator(Group::kGT),
               p.pair(p.generator(Group::kG), p.generator(Group::kGhat))));
}

TEST_CASE("pairing slots are enforced on the production backend") {
    Params p = Params::production();
    auto g = p.generator(Group::kG);
    auto gh = p.generator(Group::kGhat);
    CHECK_THROWS_AS(p.pair(gh, gh), std::invalid_argument);
    CHECK_THROWS_AS(p.pair(g, g), std::invalid_argument);
    CHECK_THROWS_AS(p.pair(p.generator(Group::kGT), gh), std::invalid_argument);
    CHECK_THROWS_AS(p.mul(g, gh), std::invalid_argument);

    Params other = Params::production();
    CHECK_THROWS_AS(p.mul(g, other.generator(Group::kG)), std::invalid_argument);
}

TEST_CASE("hash_to_group: determinism and pinned transparent exponents") {
    Params p = Params::transparent(1009);
    auto h1 = p.hash_to_group(to_bytes("metaverse"));
    auto h2 = p.hash_to_group(to_bytes("metaverse"));
    CHECK(p.eq(h1, h2));
    CHECK_FALSE(p.is_identity(h1));
    CHECK(p.discrete_log(h1) == digest_mod(to_bytes("metaverse"), p.order()));

    // find a message whose digest is ≡ 5 (mod 1009) independently, then pin
    // the mapping through the API
    bool found5 = false, found0 = false;
    for (int i = 0; i < 200000 && !(found5 && found0); ++i) {
        Bytes msg = to_bytes("probe-" + std::to_string(i));
        mpz_class e = digest_mod(msg, p.order());
        if (e == 5 && !found5) {
            found5 = true;
            CHECK(p.discrete_log(p.hash_to_group(msg)) == 5);
        }
        if (e == 0 && !found0) {
            found0 = true;
            // identity output retries with a one-byte counter appended
            auto h = p.hash_to_group(msg);
            CHECK_FALSE(p.is_identity(h));
            Bytes retry(msg.begin(), msg.end());
            retry.push_back(0);
            mpz_class expect = digest_mod(retry, p.order());
            if (expect != 0) CHECK(p.discrete_log(h) == expect);
        }
    }
    CHECK(found5);
    CHECK(found0);
}

TEST_CASE("hash_to_group: no collisions across 10^4 production hashes") {
    Params p = Params::production();
    std::unordered_set<std::string> seen;
    DeterministicRandom rng(0x6101);
    for (int i = 0; i < 10000; ++i) {
        Bytes msg = rng.bytes(24);
        auto h = p.hash_to_group(msg);
        CHECK_FALSE(p.is_identity(h));
        auto enc = p.serialize(h);
        CHECK(seen.insert(hex(enc)).second);
    }
}

TEST_CASE("scalar field matches the big-integer oracle") {
    for (Params p : {Params::transparent(23), Params::production()}) {
        const mpz_class& q = p.order();
        DeterministicRandom rng(0x6102);
        for (int i = 0; i < 200; ++i) {
            mpz_class a = oracle::rand_mod(q, rng), b = oracle::rand_mod(q, rng);
            auto sa = p.scalar_from_mpz(a), sb = p.scalar_from_mpz(b);
            CHECK(p.s_add(sa, sb).value() == (a + b) % q);
            CHECK(p.s_mul(sa, sb).value() == a * b % q);
            mpz_class d = (a - b) % q;
            if (d < 0) d += q;
            CHECK(p.s_sub(sa, sb).value() == d);
            CHECK(p.s_add(sa, p.s_neg(sa)).value() == 0);
            if (a != 0) CHECK(p.s_mul(sa, p.s_inv(sa)).value() == 1);
        }
        CHECK_THROWS_AS(p.s_inv(p.scalar_from_u64(0)), std::invalid_argument);
        // round trip at the fixed width
        auto s = p.random_scalar(rng);
        CHECK(p.s_eq(p.scalar_from_bytes(p.scalar_to_bytes(s)), s));
        CHECK(p.scalar_to_bytes(s).size() == p.scalar_bytes());
        Bytes bad(p.scalar_bytes(), 0xff);
        CHECK_THROWS_AS(p.scalar_from_bytes(bad), CodecError);
        CHECK_THROWS_AS(p.scalar_from_bytes(Bytes(3, 0)), CodecError);
    }
    // hand-pinned inverse: 4^-1 = 6 (mod 23)
    Params t23 = Params::transparent(23);
    CHECK(t23.s_inv(t23.scalar_from_u64(4)).value() == 6);
}

TEST_CASE("scripted scalar draws resample zero") {
    Params p = Params::transparent(23);
    ScriptedRandom rng;
    rng.push_uint(0, 9);  // q=23 draws are 9 bytes wide
    rng.push_uint(6, 9);
    auto s = p.random_nonzero_scalar(rng);
    CHECK(s.value() == 6);
    CHECK(rng.exhausted());
}

TEST_CASE("element serialization round-trips (transparent, 10^4)") {
    Params p = Params::transparent(1009);
    DeterministicRandom rng(0x6103);
    for (int i = 0; i < 10000; ++i) {
        Group g = std::array{Group::kG, Group::kGhat, Group::kGT}[i % 3];
        auto e = p.pow(p.generator(g), p.random_scalar(rng));
        auto enc = p.serialize(e);
        CHECK(enc.size() == p.element_bytes(g));
        CHECK(p.eq(p.deserialize(g, enc), e));
    }
    Bytes big = {0, 0, 0, 0, 0, 0, 0x03, 0xf1};  // 1009 itself: not reduced
    CHECK_THROWS_AS(p.deserialize(Group::kG, big), CodecError);
    CHECK_THROWS_AS(p.deserialize(Group::kG, Bytes(7, 0)), CodecError);
}

TEST_CASE("element serialization round-trips (production)") {
    Params p = Params::production();
    DeterministicRandom rng(0x6104);
    for (int i = 0; i < 120; ++i) {
        Group g = std::array{Group::kG, Group::kGhat}[i % 2];
        auto e = p.pow(p.generator(g), p.random_scalar(rng));
        auto enc = p.serialize(e);
        CHECK(enc.size() == p.element_bytes(g));
        CHECK(p.eq(p.deserialize(g, enc), e));
    }
    for (int i = 0; i < 6; ++i) {
        auto e = p.pow(p.generator(Group::kGT), p.random_scalar(rng));
        CHECK(p.eq(p.deserialize(Group::kGT, p.serialize(e)), e));
    }
    // identity elements are representable on the wire
    for (Group g : {Group::kG, Group::kGhat, Group::kGT})
        CHECK(p.is_identity(p.deserialize(g, p.serialize(p.identity(g)))));
    // corrupted source-group encodings are rejected
    auto enc = p.serialize(p.generator(Group::kG));
    enc[0] ^= 0x80;
    CHECK_THROWS_AS(p.deserialize(Group::kG, enc), CodecError);
    // a GT encoding of a random tower element is outside the pairing subgroup
    Bytes junk = p.serialize(p.generator(Group::kGT));
    junk[570] ^= 0x01;
    CHECK_THROWS_AS(p.deserialize(Group::kGT, junk), CodecError);
}

TEST_CASE("bilinearity is exhaustive on the transparent backend") {
    Params p = Params::transparent(1009);
    auto g = p.generator(Group::kG);
    auto gh = p.generator(Group::kGhat);
    auto gt = p.generator(Group::kGT);
    std::vector<GroupElement> ga, gb;
    ga.reserve(1009);
    gb.reserve(1009);
    for (uint64_t a = 0; a < 1009; ++a) {
        ga.push_back(p.pow(g, p.scalar_from_u64(a)));
        gb.push_back(p.pow(gh, p.scalar_from_u64(a)));
    }
    std::vector<GroupElement> gtp;
    gtp.reserve(1009);
    for (uint64_t k = 0; k < 1009; ++k) gtp.push_back(p.pow(gt, p.scalar_from_u64(k)));
    uint64_t mismatches = 0;
    for (uint64_t a = 0; a < 1009; ++a)
        for (uint64_t b = 0; b < 1009; ++b)
            if (!p.eq(p.pair(ga[a], gb[b]), gtp[a * b % 1009])) ++mismatches;
    CHECK(mismatches == 0);
}

TEST_CASE("bilinearity sampled on the production backend") {
    Params p = Params::production();
    auto g = p.generator(Group::kG);
    auto gh = p.generator(Group::kGhat);
    auto gt = p.generator(Group::kGT);
    DeterministicRandom rng(0x6105);
    for (int i = 0; i < 1000; ++i) {
        auto a = p.random_scalar(rng);
        auto b = p.random_scalar(rng);
        auto lhs = p.pair(p.pow(g, a), p.pow(gh, b));
        auto rhs = p.pow(gt, p.s_mul(a, b));
        CHECK(p.eq(lhs, rhs));
    }
    CHECK_FALSE(p.is_identity(p.pair(g, gh)));  // non-degeneracy
}

TEST_CASE("pair_eq agrees with separate pairings") {
    for (Params p : {Params::transparent(1009), Params::production()}) {
        DeterministicRandom rng(0x6106);
        auto g = p.generator(Group::kG);
        auto gh = p.generator(Group::kGhat);
        for (int i = 0; i < 8; ++i) {
            auto a1 = p.pow(g, p.random_scalar(rng));
            auto b1 = p.pow(gh, p.random_scalar(rng));
            auto a2 = p.pow(g, p.random_scalar(rng));
            auto b2 = p.pow(gh, p.random_scalar(rng));
            CHECK(p.pair_eq(a1, b1, a2, b2) == p.eq(p.pair(a1, b1), p.pair(a2, b2)));
            CHECK(p.pair_eq(a1, b1, a1, b1));
        }
        // a matched product that should pass: e(x^2, y) == e(x, y^2)
        auto two = p.scalar_from_u64(2);
        auto x = p.pow(g, p.random_scalar(rng));
        auto y = p.pow(gh, p.random_scalar(rng));
        CHECK(p.pair_eq(p.pow(x, two), y, x, p.pow(y, two)));
    }
}

TEST_CASE("operation counters see identical traffic on both backends") {
    auto run = [](const Params& p) {
        OpCounters c;
        DeterministicRandom rng(0x6107);
        {
            CounterScope scope(c);
            auto g = p.generator(Group::kG);
            auto gh = p.generator(Group::kGhat);
            auto a = p.pow(g, p.random_scalar(rng));                  // 1E
            auto b = p.mul(a, g);                                     // 1M
            auto d = p.div(b, a);                                     // 1M
            auto t = p.pair(d, gh);                                   // 1P
            (void)p.pair_eq(a, gh, a, gh);                            // 2P + cmp
            (void)p.hash_to_group(to_bytes("x"));                     // aux only
            (void)p.hash_to_group(to_bytes("x"), HashCharge::kCountExp);  // +1E
            (void)p.s_inv(p.scalar_from_u64(3));                      // aux inv
            (void)p.pow(t, p.scalar_from_u64(5));                     // gt op
            (void)p.mul(t, t);                                        // gt op
            (void)p.eq(t, t);                                         // gt cmp
            (void)p.inverse(a);                                       // free
        }
        return c;
    };
    OpCounters toy = run(Params::transparent(1009));
    OpCounters prod = run(Params::production());
    CHECK(counters_equal(toy, prod));
    CHECK(toy.exps == 2);
    CHECK(toy.muls == 2);
    CHECK(toy.pairings == 3);
    CHECK(toy.aux.hash_to_group == 2);
    CHECK(toy.aux.scalar_inversions == 1);
    CHECK(toy.aux.gt_compares == 2);
    CHECK(toy.aux.gt_ops == 2);
}

TEST_CASE("counter scopes nest and restore") {
    Params p = Params::transparent(1009);
    OpCounters outer, inner;
    {
        CounterScope a(outer);
        (void)p.pair(p.generator(Group::kG), p.generator(Group::kGhat));
        {
            CounterScope b(inner);
            (void)p.pair(p.generator(Group::kG), p.generator(Group::kGhat));
        }
        (void)p.pair(p.generator(Group::kG), p.generator(Group::kGhat));
    }
    (void)p.pair(p.generator(Group::kG), p.generator(Group::kGhat));  // unscoped
    CHECK(outer.pairings == 2);
    CHECK(inner.pairings == 1);
}

TEST_SUITE_END();
