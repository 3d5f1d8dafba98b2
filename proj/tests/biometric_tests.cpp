#include <doctest.h>

#include <set>
#include <stdexcept>

#include "cps/biometric.hpp"

using namespace cps;
using namespace cps::biometric;

TEST_SUITE_BEGIN("biometric");

TEST_CASE("enrollment is deterministic with a full mask") {
    auto a = enroll(42), b = enroll(42);
    CHECK(a.code == b.code);
    CHECK(a.mask == b.mask);
    CHECK(a.code.size() == kCodeBytes);
    CHECK(a.mask == Bytes(kCodeBytes, 0xff));
    CHECK(well_formed(a));
    CHECK(enroll(43).code != a.code);
}

TEST_CASE("unrelated templates sit near distance 0.5") {
    for (uint64_t s = 0; s < 100; ++s) {
        auto a = enroll(2 * s), b = enroll(2 * s + 1);
        IrisFeature fa{a.code, a.mask};
        double d = distance(fa, b);
        CHECK(d > 0.45);
        CHECK(d < 0.55);
    }
}

TEST_CASE("noise rate maps onto observed distance") {
    auto t = enroll(7);
    DeterministicRandom rng(99);

    SUBCASE("zero noise reproduces the template") {
        auto f = sample(t, 0.0, rng);
        CHECK(f.code == t.code);
        CHECK(distance(f, t) == 0.0);
    }
    SUBCASE("full noise flips every bit") {
        auto f = sample(t, 1.0, rng);
        CHECK(distance(f, t) == 1.0);
        for (size_t i = 0; i < kCodeBytes; ++i)
            CHECK(uint8_t(f.code[i] ^ t.code[i]) == 0xff);
    }
    SUBCASE("default 5% noise lands near 0.05") {
        for (int i = 0; i < 100; ++i) {
            double d = distance(sample(t, 0.05, rng), t);
            CHECK(d > 0.03);
            CHECK(d < 0.07);
        }
    }
    SUBCASE("out-of-range noise rejected") {
        CHECK_THROWS_AS(sample(t, -0.01, rng), std::invalid_argument);
        CHECK_THROWS_AS(sample(t, 1.01, rng), std::invalid_argument);
    }
}

TEST_CASE("matcher accepts genuine and rejects impostor captures") {
    DeterministicRandom rng(123);
    int genuine_ok = 0, impostor_rejected = 0;
    const int trials = 1000;
    for (int i = 0; i < trials; ++i) {
        auto t = enroll(uint64_t(i));
        auto impostor = enroll(uint64_t(i) + 100000);
        if (match(sample(t, 0.05, rng), t)) ++genuine_ok;
        if (!match(sample(impostor, 0.05, rng), t)) ++impostor_rejected;
    }
    CHECK(genuine_ok >= 999);
    CHECK(impostor_rejected >= 999);
}

TEST_CASE("identical and inverted codes hit the distance extremes") {
    auto t = enroll(5);
    IrisFeature same{t.code, t.mask};
    CHECK(distance(same, t) == 0.0);
    CHECK(match(same, t));
    IrisFeature inverted{t.code, t.mask};
    for (auto& c : inverted.code) c = uint8_t(~c);
    CHECK(distance(inverted, t) == 1.0);
    CHECK_FALSE(match(inverted, t));
}

TEST_CASE("masked-out bits never count") {
    auto t = enroll(11);
    // Mask off the second half everywhere, then corrupt only masked bits.
    IrisTemplate half = t;
    for (size_t i = kCodeBytes / 2; i < kCodeBytes; ++i) half.mask[i] = 0;
    CHECK(well_formed(half));
    IrisFeature f{half.code, half.mask};
    for (size_t i = kCodeBytes / 2; i < kCodeBytes; ++i) f.code[i] ^= 0xff;
    CHECK(distance(f, half) == 0.0);

    // Below 50% coverage the template is malformed.
    IrisTemplate thin = t;
    for (size_t i = kCodeBytes / 2 - 1; i < kCodeBytes; ++i) thin.mask[i] = 0;
    CHECK_FALSE(well_formed(thin));

    // Disjoint masks leave nothing to compare.
    IrisFeature left{t.code, Bytes(kCodeBytes, 0)};
    for (size_t i = 0; i < kCodeBytes / 2; ++i) left.mask[i] = 0xff;
    IrisTemplate right{t.code, Bytes(kCodeBytes, 0)};
    for (size_t i = kCodeBytes / 2; i < kCodeBytes; ++i) right.mask[i] = 0xff;
    CHECK_THROWS_AS(distance(left, right), std::invalid_argument);
}

TEST_CASE("distance is symmetric in its two captures") {
    auto a = enroll(20), b = enroll(21);
    DeterministicRandom rng(4);
    auto fa = sample(a, 0.1, rng);
    CHECK(distance(fa.code, fa.mask, b.code, b.mask) ==
          distance(b.code, b.mask, fa.code, fa.mask));
}

TEST_CASE("length mismatches are rejected") {
    auto t = enroll(9);
    IrisFeature shorter{Bytes(kCodeBytes - 1, 0), Bytes(kCodeBytes - 1, 0xff)};
    CHECK_THROWS_AS(distance(shorter, t), std::invalid_argument);
    IrisTemplate bad = t;
    bad.code.pop_back();
    DeterministicRandom rng(1);
    CHECK_THROWS_AS(sample(bad, 0.05, rng), std::invalid_argument);
}

TEST_CASE("feature wire form round-trips and validates") {
    auto t = enroll(31);
    DeterministicRandom rng(8);
    auto f = sample(t, 0.05, rng);
    Bytes wire = feature_bytes(f);
    CHECK(wire.size() == kFeatureBytes);
    auto back = feature_from_bytes(wire);
    CHECK(back.code == f.code);
    CHECK(back.mask == f.mask);

    CHECK_THROWS_AS(feature_from_bytes(BytesView(wire.data(), wire.size() - 1)),
                    CodecError);
    Bytes longer = wire;
    longer.push_back(0);
    CHECK_THROWS_AS(feature_from_bytes(longer), CodecError);
    // Underfilled mask in the wire form is rejected.
    Bytes zero_mask = wire;
    for (size_t i = kCodeBytes; i < kFeatureBytes; ++i) zero_mask[i] = 0;
    CHECK_THROWS_AS(feature_from_bytes(zero_mask), CodecError);
}

TEST_SUITE_END();
