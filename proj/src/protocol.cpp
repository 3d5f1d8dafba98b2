#include "cps/protocol.hpp"

namespace cps::protocol {

using bilinear::Group;
using bilinear::Params;

const char* abort_name(AbortCode c) {
    switch (c) {
        case AbortCode::kUnknownSn: return "unknown-sn";
        case AbortCode::kBadEndorsement: return "bad-endorsement";
        case AbortCode::kBadSignature: return "bad-signature";
        case AbortCode::kStaleChallenge: return "stale-challenge";
        case AbortCode::kIrisMismatch: return "iris-mismatch";
        case AbortCode::kUnknownAvatar: return "unknown-avatar";
        case AbortCode::kVidBindingMismatch: return "vid-binding-mismatch";
        case AbortCode::kSessionInvalid: return "session-invalid";
        case AbortCode::kOutOfOrder: return "out-of-order";
        case AbortCode::kBadTranscriptDigest: return "bad-transcript-digest";
        case AbortCode::kUnknownDriverKeys: return "unknown-driver-keys";
        case AbortCode::kMalformed: return "malformed";
    }
    return "unknown";
}

namespace {

bool known_step(uint8_t s) {
    switch (Step(s)) {
        case Step::kLoginClaim:
        case Step::kLoginChallenge:
        case Step::kLoginResponse:
        case Step::kLoginAccept:
        case Step::kDelegateClaim:
        case Step::kDelegateChallenge:
        case Step::kDelegateResponse:
        case Step::kDelegateTransfer:
        case Step::kDelegateAccept:
        case Step::kMutualClaim:
        case Step::kMutualChallenge:
        case Step::kMutualResponse:
        case Step::kMutualKeyVerifier:
        case Step::kMutualKeyProver:
        case Step::kMutualAccept:
        case Step::kAbort:
            return true;
    }
    return false;
}

identity::SerialNumber read_sn(ByteReader& r) {
    identity::SerialNumber sn;
    Bytes b = r.fixed(sn.size());
    std::copy(b.begin(), b.end(), sn.begin());
    return sn;
}

bilinear::GroupElement read_g(const Params& p, ByteReader& r) {
    return p.deserialize(Group::kG, r.fixed(p.element_bytes(Group::kG)));
}

Digest read_digest(ByteReader& r) {
    Digest d;
    Bytes b = r.fixed(d.size());
    std::copy(b.begin(), b.end(), d.begin());
    return d;
}

}  // namespace

Bytes frame(const Message& m) {
    ByteWriter w;
    w.fixed(m.session_id);
    w.u8(uint8_t(m.step));
    w.blob(m.body);
    return w.take();
}

Message unframe(ByteReader& r) {
    Message m;
    Bytes sid = r.fixed(m.session_id.size());
    std::copy(sid.begin(), sid.end(), m.session_id.begin());
    uint8_t s = r.u8();
    if (!known_step(s)) throw CodecError("unknown protocol step");
    m.step = Step(s);
    m.body = r.blob();
    return m;
}

Message unframe_bytes(BytesView b) {
    ByteReader r(b);
    Message m = unframe(r);
    r.expect_end();
    return m;
}

Message make_abort(const SessionId& sid, AbortCode code) {
    Message m;
    m.session_id = sid;
    m.step = Step::kAbort;
    m.body = {uint8_t(code)};
    return m;
}

std::optional<AbortCode> abort_code(const Message& m) {
    if (m.step != Step::kAbort || m.body.size() != 1) return std::nullopt;
    uint8_t c = m.body[0];
    if (c < 1 || c > uint8_t(AbortCode::kMalformed)) return std::nullopt;
    return AbortCode(c);
}

Bytes encode_transcript(const ProtocolTranscript& t) {
    ByteWriter w;
    for (const auto& m : t.messages) w.fixed(frame(m));
    w.u8(t.terminal_status);
    return w.take();
}

ProtocolTranscript decode_transcript(BytesView b) {
    if (b.empty()) throw CodecError("empty transcript");
    ByteReader r(b);
    ProtocolTranscript t;
    while (r.remaining() > 1) t.messages.push_back(unframe(r));
    t.terminal_status = r.u8();
    r.expect_end();
    if (t.terminal_status > ProtocolTranscript::kAborted)
        throw CodecError("bad transcript status");
    return t;
}

Digest transcript_digest(const std::vector<Message>& messages, size_t count) {
    Sha256 h;
    h.update(to_bytes("CPS-transcript-v1"));
    for (size_t i = 0; i < count && i < messages.size(); ++i)
        h.update(frame(messages[i]));
    return h.finish();
}

// ---- bodies ---------------------------------------------------------------

Bytes encode_body(const Params& p, const LoginClaimBody& b) {
    ByteWriter w;
    w.fixed(b.sn_u);
    w.blob(b.aid);
    w.fixed(p.serialize(b.sigma));
    w.fixed(p.serialize(b.h));
    w.blob(b.M);
    w.fixed(p.serialize(b.R));
    return w.take();
}

LoginClaimBody decode_login_claim(const Params& p, BytesView b) {
    ByteReader r(b);
    LoginClaimBody v;
    v.sn_u = read_sn(r);
    v.aid = r.blob();
    v.sigma = read_g(p, r);
    v.h = read_g(p, r);
    v.M = r.blob();
    v.R = read_g(p, r);
    r.expect_end();
    return v;
}

Bytes encode_body(const ChallengeBody& b) {
    if (b.c.size() != kChallengeBytes) throw std::invalid_argument("bad challenge size");
    ByteWriter w;
    w.fixed(b.c);
    return w.take();
}

ChallengeBody decode_challenge(BytesView b) {
    ByteReader r(b);
    ChallengeBody v{r.fixed(kChallengeBytes)};
    r.expect_end();
    return v;
}

Bytes encode_body(const KeyedChallengeBody& b) {
    if (b.c.size() != kChallengeBytes) throw std::invalid_argument("bad challenge size");
    ByteWriter w;
    w.fixed(b.sn);
    w.fixed(b.c);
    return w.take();
}

KeyedChallengeBody decode_keyed_challenge(BytesView b) {
    ByteReader r(b);
    KeyedChallengeBody v;
    v.sn = read_sn(r);
    v.c = r.fixed(kChallengeBytes);
    r.expect_end();
    return v;
}

Bytes encode_body(const Params& p, const PidBody& b) {
    ByteWriter w;
    w.blob(b.M_prime);
    w.fixed(p.serialize(b.R_prime));
    return w.take();
}

PidBody decode_pid_body(const Params& p, BytesView b) {
    ByteReader r(b);
    PidBody v;
    v.M_prime = r.blob();
    v.R_prime = read_g(p, r);
    r.expect_end();
    return v;
}

Bytes encode_body(const DelegateClaimBody& b) {
    ByteWriter w;
    w.blob(b.avatar_enc);
    return w.take();
}

DelegateClaimBody decode_delegate_claim(BytesView b) {
    ByteReader r(b);
    DelegateClaimBody v{r.blob()};
    r.expect_end();
    return v;
}

Bytes encode_body(const Params& p, const DelegateResponseBody& b) {
    ByteWriter w;
    w.fixed(p.serialize(b.sigma_p));
    w.fixed(p.serialize(b.h_p));
    w.blob(b.M_prime);
    w.fixed(p.serialize(b.R_prime));
    return w.take();
}

DelegateResponseBody decode_delegate_response(const Params& p, BytesView b) {
    ByteReader r(b);
    DelegateResponseBody v;
    v.sigma_p = read_g(p, r);
    v.h_p = read_g(p, r);
    v.M_prime = r.blob();
    v.R_prime = read_g(p, r);
    r.expect_end();
    return v;
}

Bytes encode_body(const Params& p, const DelegateTransferBody& b) {
    ByteWriter w;
    w.blob(b.aid);
    w.fixed(b.sn_p);
    w.fixed(p.serialize(b.sigma_p));
    w.fixed(p.serialize(b.h_p));
    w.blob(b.M);
    w.fixed(p.serialize(b.R));
    return w.take();
}

DelegateTransferBody decode_delegate_transfer(const Params& p, BytesView b) {
    ByteReader r(b);
    DelegateTransferBody v;
    v.aid = r.blob();
    v.sn_p = read_sn(r);
    v.sigma_p = read_g(p, r);
    v.h_p = read_g(p, r);
    v.M = r.blob();
    v.R = read_g(p, r);
    r.expect_end();
    return v;
}

Bytes encode_body(const AcceptBody& b) {
    ByteWriter w;
    w.blob(b.avatar_enc);
    w.blob(b.token);
    return w.take();
}

AcceptBody decode_accept(BytesView b) {
    ByteReader r(b);
    AcceptBody v;
    v.avatar_enc = r.blob();
    v.token = r.blob();
    r.expect_end();
    if (!v.token.empty() && v.token.size() != kTokenBytes)
        throw CodecError("bad token size");
    return v;
}

Bytes encode_body(const Params& p, const KeyShareBody& b) {
    ByteWriter w;
    w.fixed(p.serialize(b.share));
    w.fixed(b.binding);
    return w.take();
}

KeyShareBody decode_key_share(const Params& p, BytesView b) {
    ByteReader r(b);
    KeyShareBody v;
    v.share = read_g(p, r);
    v.binding = read_digest(r);
    r.expect_end();
    return v;
}

std::pair<Bytes, Bytes> split_m_prime(BytesView m_prime) {
    if (m_prime.size() < kChallengeBytes + 1)
        throw CodecError("rewritten message too short");
    Bytes feature(m_prime.begin(), m_prime.end() - kChallengeBytes);
    Bytes challenge(m_prime.end() - kChallengeBytes, m_prime.end());
    return {std::move(feature), std::move(challenge)};
}

}  // namespace cps::protocol
