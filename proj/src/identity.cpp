#include "cps/identity.hpp"

#include <json.hpp>

#include <algorithm>
#include <stdexcept>

namespace cps::identity {

using bilinear::Group;
using bilinear::Params;

DriverType driver_type(const Avatar& a) {
    return a.sn_u == a.sn_p ? DriverType::kHuman : DriverType::kAIProxy;
}

Bytes encode_user_id(const UserId& u) {
    if (u.rid.empty()) throw std::invalid_argument("rid must be non-empty");
    ByteWriter w;
    w.blob(u.rid);
    w.blob(u.mid);
    return w.take();
}

UserId decode_user_id(BytesView b) {
    ByteReader r(b);
    UserId u;
    u.rid = r.blob();
    u.mid = r.blob();
    r.expect_end();
    if (u.rid.empty()) throw CodecError("rid must be non-empty");
    return u;
}

namespace {

SerialNumber read_sn(ByteReader& r) {
    SerialNumber sn;
    Bytes b = r.fixed(sn.size());
    std::copy(b.begin(), b.end(), sn.begin());
    return sn;
}

bilinear::GroupElement read_g(const Params& p, ByteReader& r) {
    return p.deserialize(Group::kG, r.fixed(p.element_bytes(Group::kG)));
}

void write_template(ByteWriter& w, const biometric::IrisTemplate& t) {
    if (!biometric::well_formed(t)) throw std::invalid_argument("malformed iris template");
    w.blob(t.code);
    w.blob(t.mask);
}

biometric::IrisTemplate read_template(ByteReader& r) {
    biometric::IrisTemplate t;
    t.code = r.blob();
    t.mask = r.blob();
    if (!biometric::well_formed(t)) throw CodecError("malformed iris template");
    return t;
}

void write_vid(const Params& p, ByteWriter& w, const VID& v) {
    w.blob(v.M);
    w.fixed(p.serialize(v.R));
}

VID read_vid(const Params& p, ByteReader& r) {
    VID v;
    v.M = r.blob();
    v.R = read_g(p, r);
    return v;
}

void write_pid(const Params& p, ByteWriter& w, const PID& v) {
    w.blob(v.M_prime);
    w.fixed(p.serialize(v.R_prime));
}

PID read_pid(const Params& p, ByteReader& r) {
    PID v;
    v.M_prime = r.blob();
    v.R_prime = read_g(p, r);
    return v;
}

std::string hex_str(BytesView b) { return hex(b); }

}  // namespace

Bytes mit_signing_body(const Params& p, const MIT& m) {
    ByteWriter w;
    w.fixed(m.sn);
    w.blob(scheme::serialize_pubkey(p, m.pk));
    write_template(w, m.T);
    w.blob(m.info);
    return w.take();
}

Bytes encode_mit(const Params& p, const MIT& m) {
    ByteWriter w;
    w.fixed(mit_signing_body(p, m));
    w.blob(m.idp_sig);
    return w.take();
}

MIT decode_mit(const Params& p, BytesView b) {
    ByteReader r(b);
    MIT m;
    m.sn = read_sn(r);
    m.pk = scheme::parse_pubkey(p, r.blob());
    m.T = read_template(r);
    m.info = r.blob();
    m.idp_sig = r.blob();
    r.expect_end();
    // Shape-check the endorsement blob now; the issuer-key check is the
    // caller's job at trust boundaries (verify_endorsement).
    scheme::parse_original(p, m.idp_sig, BytesView{});
    return m;
}

bool verify_endorsement(const Params& p, const scheme::PublicKey& idp_pk,
                        const MIT& m) {
    try {
        auto tuple = scheme::parse_original(p, m.idp_sig, mit_signing_body(p, m));
        return scheme::pver(p, idp_pk, tuple, idp_pk);
    } catch (const CodecError&) {
        return false;
    }
}

Bytes encode_vid(const Params& p, const VID& v) {
    ByteWriter w;
    write_vid(p, w, v);
    return w.take();
}

VID decode_vid(const Params& p, BytesView b) {
    ByteReader r(b);
    VID v = read_vid(p, r);
    r.expect_end();
    return v;
}

Bytes encode_pid(const Params& p, const PID& v) {
    ByteWriter w;
    write_pid(p, w, v);
    return w.take();
}

PID decode_pid(const Params& p, BytesView b) {
    ByteReader r(b);
    PID v = read_pid(p, r);
    r.expect_end();
    return v;
}

Bytes encode_avatar(const Params& p, const Avatar& a) {
    ByteWriter w;
    w.fixed(a.sn_u);
    w.blob(a.aid);
    w.fixed(a.sn_p);
    w.fixed(p.serialize(a.sigma));
    w.fixed(p.serialize(a.h));
    w.u8(a.vid ? 1 : 0);
    if (a.vid) write_vid(p, w, *a.vid);
    w.u8(a.pid ? 1 : 0);
    if (a.pid) write_pid(p, w, *a.pid);
    return w.take();
}

Avatar decode_avatar(const Params& p, BytesView b) {
    ByteReader r(b);
    Avatar a;
    a.sn_u = read_sn(r);
    a.aid = r.blob();
    a.sn_p = read_sn(r);
    a.sigma = read_g(p, r);
    a.h = read_g(p, r);
    uint8_t flag = r.u8();
    if (flag > 1) throw CodecError("bad optional flag");
    if (flag) a.vid = read_vid(p, r);
    flag = r.u8();
    if (flag > 1) throw CodecError("bad optional flag");
    if (flag) a.pid = read_pid(p, r);
    r.expect_end();
    return a;
}

Bytes encode_description(const Description& fields) {
    Description sorted = fields;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i - 1].first == sorted[i].first)
            throw std::invalid_argument("duplicate description field");
    ByteWriter w;
    w.u32(uint32_t(sorted.size()));
    for (const auto& [name, value] : sorted) {
        w.blob(to_bytes(name));
        w.blob(value);
    }
    return w.take();
}

Description decode_description(BytesView b) {
    ByteReader r(b);
    uint32_t n = r.u32();
    Description d;
    d.reserve(n);
    std::string prev;
    for (uint32_t i = 0; i < n; ++i) {
        Bytes name = r.blob();
        std::string s(name.begin(), name.end());
        if (i > 0 && s <= prev) throw CodecError("description fields out of order");
        prev = s;
        d.emplace_back(std::move(s), r.blob());
    }
    r.expect_end();
    return d;
}

std::string to_debug_json(const UserId& u) {
    nlohmann::json j;
    j["rid"] = hex_str(u.rid);
    j["mid"] = hex_str(u.mid);
    return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string to_debug_json(const Params& p, const MIT& m) {
    nlohmann::json j;
    j["sn"] = hex_str(m.sn);
    j["pk"] = hex_str(scheme::serialize_pubkey(p, m.pk));
    j["template_bits"] = biometric::kCodeBits;
    j["info"] = std::string(m.info.begin(), m.info.end());
    j["endorsement"] = hex_str(m.idp_sig);
    return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string to_debug_json(const Params& p, const Avatar& a) {
    nlohmann::json j;
    j["sn_u"] = hex_str(a.sn_u);
    j["aid"] = std::string(a.aid.begin(), a.aid.end());
    j["sn_p"] = hex_str(a.sn_p);
    j["driver"] = driver_type(a) == DriverType::kHuman ? "human" : "ai-proxy";
    j["sigma"] = hex_str(p.serialize(a.sigma));
    j["h"] = hex_str(p.serialize(a.h));
    if (a.vid) {
        j["vid"]["M_bytes"] = a.vid->M.size();
        j["vid"]["R"] = hex_str(p.serialize(a.vid->R));
    }
    if (a.pid) {
        j["pid"]["M_prime_bytes"] = a.pid->M_prime.size();
        j["pid"]["R_prime"] = hex_str(p.serialize(a.pid->R_prime));
    }
    return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace cps::identity
