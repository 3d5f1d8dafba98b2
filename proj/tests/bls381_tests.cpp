#include <doctest.h>

#include "cps/bls381/fp12.hpp"
#include "cps/bls381/hash_to_g1.hpp"
#include "cps/bls381/pairing.hpp"
#include "support/gmp_oracle.hpp"
#include "support/pairing_ref.hpp"

using namespace cps;
using namespace cps::bls381;

TEST_SUITE_BEGIN("bls381");

TEST_CASE("fp arithmetic matches the big-integer oracle") {
    DeterministicRandom rng(0x5101);
    for (int i = 0; i < 2000; ++i) {
        mpz_class a = oracle::rand_mod(oracle::P(), rng);
        mpz_class b = oracle::rand_mod(oracle::P(), rng);
        Fp fa = oracle::to_fp(a), fb = oracle::to_fp(b);
        CHECK(oracle::from_fp(fp_add(fa, fb)) == oracle::addm(a, b));
        CHECK(oracle::from_fp(fp_sub(fa, fb)) == oracle::subm(a, b));
        CHECK(oracle::from_fp(fp_mul(fa, fb)) == oracle::mulm(a, b));
        CHECK(oracle::from_fp(fp_sqr(fa)) == oracle::mulm(a, a));
        CHECK(oracle::from_fp(fp_neg(fa)) == oracle::subm(0, a));
    }
}

TEST_CASE("fp inversion, exponentiation and edge values") {
    DeterministicRandom rng(0x5102);
    for (int i = 0; i < 50; ++i) {
        mpz_class a = oracle::rand_mod(oracle::P(), rng);
        if (a == 0) continue;
        Fp fa = oracle::to_fp(a);
        CHECK(fp_mul(fa, fp_inv(fa)) == Fp::one());
        CHECK(oracle::from_fp(fp_inv(fa)) == oracle::invm(a));
    }
    CHECK(fp_inv(Fp::zero()).is_zero());
    CHECK(fp_add(oracle::to_fp(oracle::P() - 1), Fp::one()).is_zero());
    CHECK(oracle::from_fp(fp_from_u64(4)) == 4);
}

TEST_CASE("fp byte round-trip and canonical rejection") {
    DeterministicRandom rng(0x5103);
    for (int i = 0; i < 200; ++i) {
        Fp a = oracle::rand_fp(rng);
        Fp back;
        REQUIRE(fp_from_bytes(fp_to_bytes(a), back));
        CHECK(back == a);
    }
    // p itself and anything >= p must be rejected
    Bytes pb = oracle::exp_bytes(oracle::P());
    Fp out;
    CHECK_FALSE(fp_from_bytes(pb, out));
    Bytes ff(48, 0xff);
    CHECK_FALSE(fp_from_bytes(ff, out));
    Bytes wrong(47, 0);
    CHECK_FALSE(fp_from_bytes(wrong, out));
}

TEST_CASE("fp square roots agree with Legendre classification") {
    DeterministicRandom rng(0x5104);
    int squares = 0;
    for (int i = 0; i < 60; ++i) {
        mpz_class a = oracle::rand_mod(oracle::P(), rng);
        Fp fa = oracle::to_fp(a);
        bool square = oracle::legendre(a) >= 0;
        CHECK(fp_is_square(fa) == square);
        Fp root;
        CHECK(fp_sqrt(fa, root) == square);
        if (square && a != 0) {
            ++squares;
            CHECK(fp_sqr(root) == fa);
        }
    }
    CHECK(squares > 5);  // sanity: the sample hit both classes
}

TEST_CASE("fp2 arithmetic against a complex-arithmetic oracle") {
    DeterministicRandom rng(0x5105);
    for (int i = 0; i < 300; ++i) {
        Fp2 a = oracle::rand_fp2(rng);
        Fp2 b = oracle::rand_fp2(rng);
        mpz_class a0 = oracle::from_fp(a.c0), a1 = oracle::from_fp(a.c1);
        mpz_class b0 = oracle::from_fp(b.c0), b1 = oracle::from_fp(b.c1);
        Fp2 prod = f2_mul(a, b);
        CHECK(oracle::from_fp(prod.c0) ==
              oracle::subm(oracle::mulm(a0, b0), oracle::mulm(a1, b1)));
        CHECK(oracle::from_fp(prod.c1) ==
              oracle::addm(oracle::mulm(a0, b1), oracle::mulm(a1, b0)));
        CHECK(f2_sqr(a) == f2_mul(a, a));
        if (!a.is_zero()) CHECK(f2_mul(a, f2_inv(a)) == Fp2::one());
    }
}

TEST_CASE("fp2 square roots and the twist constant") {
    DeterministicRandom rng(0x5106);
    for (int i = 0; i < 40; ++i) {
        Fp2 z = oracle::rand_fp2(rng);
        Fp2 sq = f2_sqr(z);
        CHECK(f2_is_square(sq));
        Fp2 root;
        REQUIRE(f2_sqrt(sq, root));
        CHECK((root == z || root == f2_neg(z)));
    }
    // xi = 1 + u must be a non-square for the tower to be a field
    Fp2 xi{Fp::one(), Fp::one()};
    CHECK_FALSE(f2_is_square(xi));
    Fp2 dummy;
    CHECK_FALSE(f2_sqrt(xi, dummy));
}

TEST_CASE("fp6/fp12 ring laws on random samples") {
    DeterministicRandom rng(0x5107);
    auto rand_f6 = [&] {
        return Fp6{oracle::rand_fp2(rng), oracle::rand_fp2(rng), oracle::rand_fp2(rng)};
    };
    for (int i = 0; i < 25; ++i) {
        Fp6 a = rand_f6(), b = rand_f6(), c = rand_f6();
        CHECK(f6_mul(a, b) == f6_mul(b, a));
        CHECK(f6_mul(f6_mul(a, b), c) == f6_mul(a, f6_mul(b, c)));
        CHECK(f6_mul(a, f6_add(b, c)) == f6_add(f6_mul(a, b), f6_mul(a, c)));
        CHECK(f6_sqr(a) == f6_mul(a, a));
        if (!a.is_zero()) CHECK(f6_mul(a, f6_inv(a)) == Fp6::one());
        Fp12 x{a, b}, y{b, c};
        CHECK(f12_mul(x, y) == f12_mul(y, x));
        CHECK(f12_sqr(x) == f12_mul(x, x));
        if (!x.is_zero()) CHECK(f12_mul(x, f12_inv(x)) == Fp12::one());
    }
}

TEST_CASE("fp12 frobenius equals generic powering by p") {
    DeterministicRandom rng(0x5108);
    Bytes p_bytes = oracle::exp_bytes(oracle::P());
    for (int i = 0; i < 3; ++i) {
        Fp12 z{{oracle::rand_fp2(rng), oracle::rand_fp2(rng), oracle::rand_fp2(rng)},
               {oracle::rand_fp2(rng), oracle::rand_fp2(rng), oracle::rand_fp2(rng)}};
        CHECK(f12_frobenius(z) == f12_pow(z, p_bytes));
        Fp12 y = z;
        for (int k = 0; k < 12; ++k) y = f12_frobenius(y);
        CHECK(y == z);
    }
}

TEST_CASE("cyclotomic squaring agrees with generic squaring") {
    DeterministicRandom rng(0x5109);
    for (int i = 0; i < 10; ++i) {
        Fp12 f{{oracle::rand_fp2(rng), oracle::rand_fp2(rng), oracle::rand_fp2(rng)},
               {oracle::rand_fp2(rng), oracle::rand_fp2(rng), oracle::rand_fp2(rng)}};
        if (f.is_zero()) continue;
        // project into the cyclotomic subgroup via the easy exponent
        Fp12 z = f12_mul(f12_conj(f), f12_inv(f));
        z = f12_mul(f12_frobenius(f12_frobenius(z)), z);
        CHECK(cyclotomic_sqr(z) == f12_sqr(z));
    }
}

TEST_CASE("g1 group law and generator") {
    CHECK(g1_on_curve(g1_generator()));
    CHECK(g1_in_subgroup(g1_generator()));
    DeterministicRandom rng(0x510a);
    for (int i = 0; i < 10; ++i) {
        mpz_class a = oracle::rand_mod(oracle::R(), rng);
        mpz_class b = oracle::rand_mod(oracle::R(), rng);
        G1 pa = g1_mul(g1_generator(), oracle::exp_bytes(a));
        G1 pb = g1_mul(g1_generator(), oracle::exp_bytes(b));
        G1 psum = g1_mul(g1_generator(), oracle::exp_bytes((a + b) % oracle::R()));
        CHECK(g1_eq(g1_add(pa, pb), psum));
        CHECK(g1_on_curve(pa));
        CHECK(g1_in_subgroup(pa));
    }
    CHECK(g1_is_identity(g1_mul(g1_generator(), r_order_bytes())));
    CHECK(g1_eq(g1_add(g1_generator(), g1_identity()), g1_generator()));
    CHECK(g1_is_identity(g1_add(g1_generator(), g1_neg(g1_generator()))));
}

TEST_CASE("g1 serialization round-trip and strict rejection") {
    DeterministicRandom rng(0x510b);
    for (int i = 0; i < 25; ++i) {
        G1 p = g1_mul(g1_generator(), oracle::exp_bytes(oracle::rand_mod(oracle::R(), rng)));
        auto b = g1_serialize(p);
        G1 q;
        REQUIRE(g1_deserialize(b, q));
        CHECK(g1_eq(p, q));
    }
    // identity round-trip
    auto idb = g1_serialize(g1_identity());
    G1 q;
    REQUIRE(g1_deserialize(idb, q));
    CHECK(g1_is_identity(q));
    // flag and range violations
    auto good = g1_serialize(g1_generator());
    auto bad = good;
    bad[0] &= 0x7f;  // uncompressed flag
    CHECK_FALSE(g1_deserialize(bad, q));
    bad = good;
    bad[0] |= 0x40;  // infinity with nonzero payload
    CHECK_FALSE(g1_deserialize(bad, q));
    Bytes ffs(48, 0xff);
    CHECK_FALSE(g1_deserialize(ffs, q));
    // a curve point outside the r-subgroup must be rejected: search a small x
    bool found = false;
    for (uint64_t x = 1; x < 64 && !found; ++x) {
        Fp fx = fp_from_u64(x);
        Fp rhs = fp_add(fp_mul(fp_sqr(fx), fx), fp_from_u64(4));
        Fp y;
        if (!fp_sqrt(rhs, y)) continue;
        G1 pt = G1Curve::from_affine(fx, y);
        if (g1_in_subgroup(pt)) continue;  // unlucky (cofactor multiple)
        found = true;
        auto enc = fp_to_bytes(fx);
        enc[0] |= 0x80;
        if (fp_gt(y, fp_neg(y))) enc[0] |= 0x20;
        CHECK_FALSE(g1_deserialize(enc, q));
    }
    CHECK(found);
}

TEST_CASE("g2 group law, generator, serialization") {
    CHECK(g2_on_curve(g2_generator()));
    CHECK(g2_in_subgroup(g2_generator()));
    DeterministicRandom rng(0x510c);
    for (int i = 0; i < 6; ++i) {
        mpz_class a = oracle::rand_mod(oracle::R(), rng);
        mpz_class b = oracle::rand_mod(oracle::R(), rng);
        G2 pa = g2_mul(g2_generator(), oracle::exp_bytes(a));
        G2 pb = g2_mul(g2_generator(), oracle::exp_bytes(b));
        G2 psum = g2_mul(g2_generator(), oracle::exp_bytes((a + b) % oracle::R()));
        CHECK(g2_eq(g2_add(pa, pb), psum));
        CHECK(g2_in_subgroup(pa));
        auto enc = g2_serialize(pa);
        G2 back;
        REQUIRE(g2_deserialize(enc, back));
        CHECK(g2_eq(back, pa));
    }
    CHECK(g2_is_identity(g2_mul(g2_generator(), r_order_bytes())));
    auto idb = g2_serialize(g2_identity());
    G2 q;
    REQUIRE(g2_deserialize(idb, q));
    CHECK(g2_is_identity(q));
    auto bad = g2_serialize(g2_generator());
    bad[0] &= 0x7f;
    CHECK_FALSE(g2_deserialize(bad, q));
}

TEST_CASE("optimized pairing matches the textbook reference") {
    DeterministicRandom rng(0x510d);
    for (int i = 0; i < 6; ++i) {
        G1 p = g1_mul(g1_generator(), oracle::exp_bytes(oracle::rand_mod(oracle::R(), rng)));
        G2 q = g2_mul(g2_generator(), oracle::exp_bytes(oracle::rand_mod(oracle::R(), rng)));
        CHECK(pairing(p, q) == pairing_ref::pairing_ref(p, q));
    }
    CHECK(pairing(g1_generator(), g2_generator()) ==
          pairing_ref::pairing_ref(g1_generator(), g2_generator()));
}

TEST_CASE("pairing bilinearity, non-degeneracy, identities") {
    DeterministicRandom rng(0x510e);
    Fp12 base = pairing(g1_generator(), g2_generator());
    CHECK_FALSE(base.is_one());
    CHECK(gt_in_subgroup(base));
    CHECK(f12_pow(base, r_order_bytes()).is_one());
    for (int i = 0; i < 4; ++i) {
        mpz_class a = oracle::rand_mod(oracle::R(), rng);
        mpz_class b = oracle::rand_mod(oracle::R(), rng);
        G1 pa = g1_mul(g1_generator(), oracle::exp_bytes(a));
        G2 qb = g2_mul(g2_generator(), oracle::exp_bytes(b));
        Fp12 lhs = pairing(pa, qb);
        Fp12 rhs = f12_pow(base, oracle::exp_bytes(a * b % oracle::R()));
        CHECK(lhs == rhs);
    }
    CHECK(pairing(g1_identity(), g2_generator()).is_one());
    CHECK(pairing(g1_generator(), g2_identity()).is_one());
}

TEST_CASE("pairing products fuse correctly") {
    DeterministicRandom rng(0x510f);
    G1 p = g1_mul(g1_generator(), oracle::exp_bytes(oracle::rand_mod(oracle::R(), rng)));
    G2 q = g2_mul(g2_generator(), oracle::exp_bytes(oracle::rand_mod(oracle::R(), rng)));
    // e(P,Q) * e(-P,Q) == 1
    CHECK(pairing_product({{p, q}, {g1_neg(p), q}}).is_one());
    // product equals the product of individual pairings
    G1 p2 = g1_mul(g1_generator(), oracle::exp_bytes(oracle::rand_mod(oracle::R(), rng)));
    G2 q2 = g2_mul(g2_generator(), oracle::exp_bytes(oracle::rand_mod(oracle::R(), rng)));
    CHECK(pairing_product({{p, q}, {p2, q2}}) == f12_mul(pairing(p, q), pairing(p2, q2)));
}

TEST_CASE("hash_to_g1 determinism, separation, subgroup membership") {
    Bytes dst = to_bytes("CPS-H-v1");
    G1 a = hash_to_g1(to_bytes("hello"), dst);
    G1 b = hash_to_g1(to_bytes("hello"), dst);
    G1 c = hash_to_g1(to_bytes("hellp"), dst);
    G1 d = hash_to_g1(to_bytes("hello"), to_bytes("CPS-H-v2"));
    CHECK(g1_eq(a, b));
    CHECK_FALSE(g1_eq(a, c));
    CHECK_FALSE(g1_eq(a, d));
    DeterministicRandom rng(0x5110);
    for (int i = 0; i < 20; ++i) {
        G1 h = hash_to_g1(rng.bytes(32), dst);
        CHECK(g1_in_subgroup(h));
        CHECK_FALSE(g1_is_identity(h));
    }
}

TEST_CASE("svdw map always lands on the curve") {
    DeterministicRandom rng(0x5111);
    for (int i = 0; i < 100; ++i) {
        G1 pt = map_to_curve_svdw(oracle::rand_fp(rng));
        CHECK(g1_on_curve(pt));
    }
    CHECK(g1_on_curve(map_to_curve_svdw(Fp::zero())));
    CHECK(g1_on_curve(map_to_curve_svdw(Fp::one())));
    CHECK(g1_on_curve(map_to_curve_svdw(fp_neg(Fp::one()))));
}

TEST_CASE("expand_message_xmd shape and determinism") {
    Bytes dst = to_bytes("CPS-H-v1");
    Bytes a = expand_message_xmd(to_bytes("msg"), dst, 128);
    Bytes b = expand_message_xmd(to_bytes("msg"), dst, 128);
    CHECK(a.size() == 128);
    CHECK(a == b);
    CHECK(expand_message_xmd(to_bytes("msh"), dst, 128) != a);
    // the requested length is mixed into the first block, so a shorter
    // expansion is a different stream, not a prefix
    Bytes c = expand_message_xmd(to_bytes("msg"), dst, 64);
    CHECK(c.size() == 64);
    CHECK(c != Bytes(a.begin(), a.begin() + 64));
}

TEST_SUITE_END();
