#include <doctest.h>
#include <json.hpp>

#include <set>

#include "cps/identity.hpp"

using namespace cps;
using namespace cps::identity;
using bilinear::Group;
using bilinear::Params;

TEST_SUITE_BEGIN("identity");

namespace {

SerialNumber sn_from(RandomSource& rng) {
    SerialNumber sn;
    auto b = rng.bytes(sn.size());
    std::copy(b.begin(), b.end(), sn.begin());
    return sn;
}

Avatar random_avatar(const Params& p, RandomSource& rng, bool with_vid, bool with_pid) {
    Avatar a;
    a.sn_u = sn_from(rng);
    a.aid = rng.bytes(size_t(rng.u64() % 40));
    a.sn_p = (rng.u64() % 2) ? a.sn_u : sn_from(rng);
    auto g = p.generator(Group::kG);
    a.sigma = p.pow(g, p.random_scalar(rng));
    a.h = p.pow(g, p.random_scalar(rng));
    if (with_vid) a.vid = VID{rng.bytes(size_t(rng.u64() % 64)), p.pow(g, p.random_scalar(rng))};
    if (with_pid) a.pid = PID{rng.bytes(size_t(rng.u64() % 64)), p.pow(g, p.random_scalar(rng))};
    return a;
}

bool avatar_equal(const Params& p, const Avatar& a, const Avatar& b) {
    return encode_avatar(p, a) == encode_avatar(p, b);
}

}  // namespace

TEST_CASE("driver type follows the serial-number rule") {
    auto p = Params::transparent(23);
    DeterministicRandom rng(1);
    Avatar a = random_avatar(p, rng, false, false);
    a.sn_p = a.sn_u;
    CHECK(driver_type(a) == DriverType::kHuman);
    a.sn_p[15] ^= 1;
    CHECK(driver_type(a) == DriverType::kAIProxy);
}

TEST_CASE("user id codec") {
    UserId u{to_bytes("alice real"), to_bytes("mid-01")};
    auto enc = encode_user_id(u);
    auto back = decode_user_id(enc);
    CHECK(back.rid == u.rid);
    CHECK(back.mid == u.mid);

    CHECK_THROWS_AS(encode_user_id(UserId{{}, to_bytes("m")}), std::invalid_argument);
    CHECK_THROWS_AS(decode_user_id(Bytes{}), CodecError);
    // hand-built encoding with empty rid
    ByteWriter w;
    w.blob(Bytes{});
    w.blob(to_bytes("m"));
    auto bad = w.take();
    CHECK_THROWS_AS(decode_user_id(bad), CodecError);
    auto trailing = enc;
    trailing.push_back(0);
    CHECK_THROWS_AS(decode_user_id(trailing), CodecError);
}

TEST_CASE("description blobs are canonical") {
    Description d1{{"speech", to_bytes("s-model")}, {"face", to_bytes("f-model")}};
    Description d2{{"face", to_bytes("f-model")}, {"speech", to_bytes("s-model")}};
    CHECK(encode_description(d1) == encode_description(d2));

    auto enc = encode_description(d1);
    auto back = decode_description(enc);
    REQUIRE(back.size() == 2);
    CHECK(back[0].first == "face");
    CHECK(back[1].first == "speech");

    Description dup{{"face", {}}, {"face", {}}};
    CHECK_THROWS_AS(encode_description(dup), std::invalid_argument);

    // out-of-order fields are non-canonical and rejected
    ByteWriter w;
    w.u32(2);
    w.blob(to_bytes("speech"));
    w.blob(Bytes{});
    w.blob(to_bytes("face"));
    w.blob(Bytes{});
    CHECK_THROWS_AS(decode_description(w.peek()), CodecError);

    auto trailing = enc;
    trailing.push_back(9);
    CHECK_THROWS_AS(decode_description(trailing), CodecError);
    CHECK(decode_description(encode_description({})).empty());
}

TEST_CASE("mit codec and endorsement round trip") {
    for (const Params& p : {Params::transparent(1009), Params::production()}) {
        DeterministicRandom rng(7);
        auto idp = scheme::keygen(p, rng);
        auto user = scheme::keygen(p, rng);

        MIT m;
        m.sn = sn_from(rng);
        m.pk = user.pk;
        m.T = biometric::enroll(99);
        m.info = to_bytes("anon desc");
        m.idp_sig = scheme::serialize_original(
            p, scheme::dgen(p, idp.sk, mit_signing_body(p, m), idp.pk, rng));

        auto enc = encode_mit(p, m);
        auto back = decode_mit(p, enc);
        CHECK(encode_mit(p, back) == enc);
        CHECK(back.sn == m.sn);
        CHECK(back.info == m.info);
        CHECK(verify_endorsement(p, idp.pk, back));

        // any signed-field change invalidates the endorsement
        MIT tampered = back;
        tampered.info.push_back('!');
        CHECK_FALSE(verify_endorsement(p, idp.pk, tampered));
        MIT bad_sig = back;
        bad_sig.idp_sig[3] ^= 1;
        CHECK_FALSE(verify_endorsement(p, idp.pk, bad_sig));
        // a different issuer key does not verify it
        auto other = scheme::keygen(p, rng);
        CHECK_FALSE(verify_endorsement(p, other.pk, back));

        // endorsement blob must parse as an original signature
        MIT junk_sig = back;
        junk_sig.idp_sig = to_bytes("zz");
        CHECK_THROWS_AS(decode_mit(p, encode_mit(p, junk_sig)), CodecError);

        CHECK_THROWS_AS(decode_mit(p, BytesView(enc.data(), enc.size() - 1)), CodecError);
    }
}

TEST_CASE("vid and pid codecs enforce membership and length") {
    auto p = Params::transparent(1009);
    DeterministicRandom rng(3);
    auto g = p.generator(Group::kG);
    VID v{to_bytes("desc"), p.pow(g, p.random_scalar(rng))};
    auto back = decode_vid(p, encode_vid(p, v));
    CHECK(back.M == v.M);
    CHECK(p.eq(back.R, v.R));

    // toy encoding with a residue >= q is not a group element
    auto enc = encode_vid(p, v);
    for (size_t i = enc.size() - 8; i < enc.size(); ++i) enc[i] = 0xff;
    CHECK_THROWS_AS(decode_vid(p, enc), CodecError);

    PID pd{to_bytes("feature||challenge"), p.pow(g, p.random_scalar(rng))};
    auto pback = decode_pid(p, encode_pid(p, pd));
    CHECK(pback.M_prime == pd.M_prime);
    CHECK(p.eq(pback.R_prime, pd.R_prime));
    CHECK_THROWS_AS(decode_pid(p, Bytes{}), CodecError);
}

TEST_CASE("avatar codec covers every optional combination") {
    for (const Params& p : {Params::transparent(1009), Params::production()}) {
        DeterministicRandom rng(11);
        for (bool with_vid : {false, true}) {
            for (bool with_pid : {false, true}) {
                Avatar a = random_avatar(p, rng, with_vid, with_pid);
                auto enc = encode_avatar(p, a);
                Avatar back = decode_avatar(p, enc);
                CHECK(avatar_equal(p, a, back));
                CHECK(back.vid.has_value() == with_vid);
                CHECK(back.pid.has_value() == with_pid);
            }
        }
        Avatar a = random_avatar(p, rng, true, true);
        auto enc = encode_avatar(p, a);
        // truncations at every prefix length fail loudly
        for (size_t cut : {size_t(0), size_t(10), enc.size() / 2, enc.size() - 1})
            CHECK_THROWS_AS(decode_avatar(p, BytesView(enc.data(), cut)), CodecError);
        auto trailing = enc;
        trailing.push_back(0);
        CHECK_THROWS_AS(decode_avatar(p, trailing), CodecError);
        // optional flag must be 0 or 1
        auto bad_flag = encode_avatar(p, random_avatar(p, rng, false, false));
        bad_flag[bad_flag.size() - 2] = 2;  // vid flag position when both absent
        CHECK_THROWS_AS(decode_avatar(p, bad_flag), CodecError);
    }
}

TEST_CASE("avatar round-trip fuzz and injectivity at scale") {
    auto p = Params::transparent(1009);
    DeterministicRandom rng(2026);
    std::set<Bytes> encodings;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        Avatar a = random_avatar(p, rng, rng.u64() % 2, rng.u64() % 2);
        auto enc = encode_avatar(p, a);
        Avatar back = decode_avatar(p, enc);
        REQUIRE(encode_avatar(p, back) == enc);
        encodings.insert(std::move(enc));
    }
    CHECK(encodings.size() == size_t(n));
}

TEST_CASE("debug json renders without touching canonical bytes") {
    auto p = Params::transparent(1009);
    DeterministicRandom rng(5);
    UserId u{Bytes{0xff, 0xfe, 0x00}, to_bytes("mid")};  // non-UTF8 rid
    auto j = nlohmann::json::parse(to_debug_json(u));
    CHECK(j.contains("rid"));

    Avatar a = random_avatar(p, rng, true, true);
    auto ja = nlohmann::json::parse(to_debug_json(p, a));
    CHECK(ja.contains("driver"));
    CHECK(ja.contains("vid"));

    auto idp = scheme::keygen(p, rng);
    MIT m;
    m.sn = sn_from(rng);
    m.pk = idp.pk;
    m.T = biometric::enroll(1);
    m.info = Bytes{0x80, 0x81};  // invalid UTF-8 must not break rendering
    m.idp_sig = scheme::serialize_original(
        p, scheme::dgen(p, idp.sk, mit_signing_body(p, m), idp.pk, rng));
    auto jm = nlohmann::json::parse(to_debug_json(p, m));
    CHECK(jm.contains("sn"));
}

TEST_SUITE_END();
