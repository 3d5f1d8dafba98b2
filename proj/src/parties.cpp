#include "cps/parties.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <thread>

namespace cps::protocol {

namespace {

using identity::Avatar;
using identity::DriverType;
using identity::MIT;
using identity::SerialNumber;

SessionId fresh_sid(RandomSource& rng) {
    SessionId sid{};
    Bytes b = rng.bytes(sid.size());
    std::copy(b.begin(), b.end(), sid.begin());
    return sid;
}

scheme::ChameleonTuple tuple_of(const bilinear::GroupElement& sigma,
                                const bilinear::GroupElement& h, BytesView M,
                                const bilinear::GroupElement& R) {
    scheme::ChameleonTuple t;
    t.h = h;
    t.M = Bytes(M.begin(), M.end());
    t.R = R;
    t.sigma = sigma;
    return t;
}

void capture_pause(const ClientOptions& opts) {
    if (opts.iris_delay_ms > 0)
        std::this_thread::sleep_for(std::chrono::milliseconds(opts.iris_delay_ms));
}

// Client-side failure: close the transcript and throw. When the failure is a
// local decision (not a received abort), the client's own abort message is
// appended so the transcript records why the session died.
[[noreturn]] void bail_local(ProtocolTranscript& t, const SessionId& sid,
                             AbortCode code) {
    t.add(make_abort(sid, code));
    t.terminal_status = ProtocolTranscript::kAborted;
    throw ProtocolAbort(code, std::move(t));
}

// The peer replied with something other than the expected step: an abort
// (carry its code) or garbage (malformed).
[[noreturn]] void bail_reply(ProtocolTranscript& t, const Message& reply) {
    t.terminal_status = ProtocolTranscript::kAborted;
    auto code = abort_code(reply);
    throw ProtocolAbort(code ? *code : AbortCode::kMalformed, std::move(t));
}

Message expect_step(ProtocolTranscript& t, Endpoint& ep, const Message& out,
                    Step want) {
    t.add(out);
    Message reply = ep.exchange(out);
    t.add(reply);
    if (reply.step != want) bail_reply(t, reply);
    return reply;
}

}  // namespace

// ---------------------------------------------------------------------------
// Server

Server::Server(const bilinear::Params& p, registry::Registry& reg, RandomSource& rng)
    : p_(p), reg_(reg), rng_(rng) {}

void Server::register_slot(const SerialNumber& sn_u, BytesView aid) {
    std::lock_guard lk(mu_);
    Bytes key(aid.begin(), aid.end());
    if (key.empty()) throw std::invalid_argument("empty avatar id");
    if (slots_.count(key)) throw std::invalid_argument("avatar id already taken");
    Slot s;
    s.sn_u = sn_u;
    s.aid = key;
    slots_.emplace(std::move(key), std::move(s));
}

bool Server::has_slot(BytesView aid) const {
    std::lock_guard lk(mu_);
    return slots_.count(Bytes(aid.begin(), aid.end())) != 0;
}

std::optional<Avatar> Server::avatar_record(BytesView aid) const {
    std::lock_guard lk(mu_);
    auto it = slots_.find(Bytes(aid.begin(), aid.end()));
    if (it == slots_.end()) return std::nullopt;
    return it->second.av;
}

bool Server::token_valid(BytesView aid, BytesView token) const {
    std::lock_guard lk(mu_);
    auto it = slots_.find(Bytes(aid.begin(), aid.end()));
    if (it == slots_.end() || it->second.token.empty()) return false;
    const Bytes& have = it->second.token;
    return have.size() == token.size() &&
           std::equal(have.begin(), have.end(), token.begin());
}

Message Server::handle(const Message& m) {
    std::lock_guard lk(mu_);
    switch (m.step) {
        case Step::kLoginClaim:
            return handle_login_claim(m);
        case Step::kLoginResponse:
            return handle_login_response(m);
        case Step::kDelegateTransfer:
            return handle_transfer(m);
        case Step::kAbort:
            logins_.erase(m.session_id);
            return m;  // acknowledge by echo; session is gone
        default:
            return make_abort(m.session_id, AbortCode::kOutOfOrder);
    }
}

Message Server::handle_login_claim(const Message& m) {
    if (logins_.count(m.session_id)) {
        logins_.erase(m.session_id);
        return make_abort(m.session_id, AbortCode::kOutOfOrder);
    }
    LoginClaimBody b;
    try {
        b = decode_login_claim(p_, m.body);
    } catch (const CodecError&) {
        return make_abort(m.session_id, AbortCode::kMalformed);
    }
    auto slot = slots_.find(b.aid);
    if (slot == slots_.end() || slot->second.sn_u != b.sn_u)
        return make_abort(m.session_id, AbortCode::kUnknownAvatar);
    MIT mit;
    try {
        mit = reg_.get_mit(b.sn_u);
    } catch (const registry::UnknownSn&) {
        return make_abort(m.session_id, AbortCode::kUnknownSn);
    }
    if (!cache_.check(p_, reg_.idp_pk(), mit))
        return make_abort(m.session_id, AbortCode::kBadEndorsement);
    if (!scheme::pver(p_, mit.pk, tuple_of(b.sigma, b.h, b.M, b.R), mit.pk))
        return make_abort(m.session_id, AbortCode::kBadSignature);

    LoginSession s;
    s.claim = b;
    s.mit = mit;
    s.challenge = rng_.bytes(kChallengeBytes);
    Message reply{m.session_id, Step::kLoginChallenge,
                  encode_body(ChallengeBody{s.challenge})};
    logins_[m.session_id] = std::move(s);
    return reply;
}

Message Server::handle_login_response(const Message& m) {
    auto it = logins_.find(m.session_id);
    if (it == logins_.end() || it->second.expect != Step::kLoginResponse)
        return make_abort(m.session_id, AbortCode::kOutOfOrder);
    LoginSession s = std::move(it->second);
    logins_.erase(it);  // terminal either way

    PidBody b;
    Bytes feature_raw, chal;
    try {
        b = decode_pid_body(p_, m.body);
        std::tie(feature_raw, chal) = split_m_prime(b.M_prime);
    } catch (const CodecError&) {
        return make_abort(m.session_id, AbortCode::kMalformed);
    }
    if (chal != s.challenge || spent_challenges_.count(chal))
        return make_abort(m.session_id, AbortCode::kStaleChallenge);
    spent_challenges_.insert(chal);

    biometric::IrisFeature feat;
    try {
        feat = biometric::feature_from_bytes(feature_raw);
    } catch (const CodecError&) {
        return make_abort(m.session_id, AbortCode::kMalformed);
    }
    if (!biometric::match(feat, s.mit.T))
        return make_abort(m.session_id, AbortCode::kIrisMismatch);
    if (!scheme::pver(p_, s.mit.pk,
                      tuple_of(s.claim.sigma, s.claim.h, b.M_prime, b.R_prime),
                      s.mit.pk))
        return make_abort(m.session_id, AbortCode::kBadSignature);

    Avatar av;
    av.sn_u = s.claim.sn_u;
    av.aid = s.claim.aid;
    av.sn_p = s.claim.sn_u;  // human-driven at login
    av.sigma = s.claim.sigma;
    av.h = s.claim.h;
    av.vid = identity::VID{s.claim.M, s.claim.R};
    av.pid = identity::PID{b.M_prime, b.R_prime};

    Slot& slot = slots_.at(s.claim.aid);
    slot.av = av;
    slot.token = rng_.bytes(kTokenBytes);
    return Message{m.session_id, Step::kLoginAccept,
                   encode_body(AcceptBody{identity::encode_avatar(p_, av), slot.token})};
}

Message Server::handle_transfer(const Message& m) {
    DelegateTransferBody b;
    try {
        b = decode_delegate_transfer(p_, m.body);
    } catch (const CodecError&) {
        return make_abort(m.session_id, AbortCode::kMalformed);
    }
    auto it = slots_.find(b.aid);
    if (it == slots_.end()) return make_abort(m.session_id, AbortCode::kUnknownAvatar);
    Slot& slot = it->second;
    // Hand-over requires a live human session: record filled, token active,
    // original manipulator still driving. A second transfer of the same
    // avatar fails here because the first one forced the human offline.
    if (!slot.av || slot.token.empty() ||
        identity::driver_type(*slot.av) != DriverType::kHuman)
        return make_abort(m.session_id, AbortCode::kSessionInvalid);
    const Avatar& stored = *slot.av;
    if (!stored.vid || b.M != stored.vid->M)
        return make_abort(m.session_id, AbortCode::kVidBindingMismatch);

    MIT mit_u, mit_p;
    try {
        mit_u = reg_.get_mit(stored.sn_u);
        mit_p = reg_.get_mit(b.sn_p);
    } catch (const registry::UnknownSn&) {
        return make_abort(m.session_id, AbortCode::kUnknownSn);
    }
    if (!cache_.check(p_, reg_.idp_pk(), mit_u) ||
        !cache_.check(p_, reg_.idp_pk(), mit_p))
        return make_abort(m.session_id, AbortCode::kBadEndorsement);
    if (!scheme::pver(p_, mit_u.pk, tuple_of(b.sigma_p, b.h_p, b.M, b.R), mit_p.pk))
        return make_abort(m.session_id, AbortCode::kBadSignature);

    Avatar next;
    next.sn_u = stored.sn_u;
    next.aid = stored.aid;
    next.sn_p = b.sn_p;
    next.sigma = b.sigma_p;
    next.h = b.h_p;
    next.vid = identity::VID{b.M, b.R};
    next.pid = std::nullopt;  // the proxy holds the capture presentation
    slot.av = next;
    slot.token.clear();  // the original manipulator is forced offline
    return Message{m.session_id, Step::kDelegateAccept,
                   encode_body(AcceptBody{identity::encode_avatar(p_, next), {}})};
}

void Server::save_slots(const std::filesystem::path& path) const {
    std::lock_guard lk(mu_);
    ByteWriter w;
    w.u32(static_cast<uint32_t>(slots_.size()));
    for (const auto& [aid, s] : slots_) {
        w.blob(aid);
        w.fixed(BytesView(s.sn_u.data(), s.sn_u.size()));
        w.u8(s.av ? 1 : 0);
        if (s.av) w.blob(identity::encode_avatar(p_, *s.av));
        w.u8(s.token.empty() ? 0 : 1);
        if (!s.token.empty()) w.fixed(s.token);
    }
    Bytes out = w.take();
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f.write(reinterpret_cast<const char*>(out.data()),
            static_cast<std::streamsize>(out.size()));
}

void Server::load_slots(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path.string());
    Bytes raw((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    std::lock_guard lk(mu_);
    std::map<Bytes, Slot> fresh;
    ByteReader r(raw);
    uint32_t n = r.u32();
    for (uint32_t i = 0; i < n; ++i) {
        Slot s;
        s.aid = r.blob();
        Bytes sn = r.fixed(s.sn_u.size());
        std::copy(sn.begin(), sn.end(), s.sn_u.begin());
        if (r.u8()) s.av = identity::decode_avatar(p_, r.blob());
        if (r.u8()) s.token = r.fixed(kTokenBytes);
        Bytes key = s.aid;
        fresh.emplace(std::move(key), std::move(s));
    }
    r.expect_end();
    slots_ = std::move(fresh);
}

// ---------------------------------------------------------------------------
// ProxyParty

ProxyParty::ProxyParty(const bilinear::Params& p, registry::Registry& reg,
                       UserCreds creds, Endpoint& to_server, RandomSource& rng)
    : p_(p), reg_(reg), creds_(std::move(creds)), server_(to_server), rng_(rng) {}

std::optional<ProxyParty::DelegationRecord> ProxyParty::record_for(BytesView aid) const {
    std::lock_guard lk(mu_);
    auto it = records_.find(Bytes(aid.begin(), aid.end()));
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

Message ProxyParty::handle(const Message& m) {
    std::lock_guard lk(mu_);
    if (m.step == Step::kAbort) {
        sessions_.erase(m.session_id);
        return m;
    }
    if (m.step == Step::kDelegateClaim) {
        if (sessions_.count(m.session_id))
            return make_abort(m.session_id, AbortCode::kOutOfOrder);
        DelegateClaimBody b;
        Avatar av;
        try {
            b = decode_delegate_claim(m.body);
            av = identity::decode_avatar(p_, b.avatar_enc);
        } catch (const CodecError&) {
            return make_abort(m.session_id, AbortCode::kMalformed);
        }
        if (!av.vid) return make_abort(m.session_id, AbortCode::kMalformed);
        MIT mit_u;
        try {
            mit_u = reg_.get_mit(av.sn_u);
        } catch (const registry::UnknownSn&) {
            return make_abort(m.session_id, AbortCode::kUnknownSn);
        }
        if (!cache_.check(p_, reg_.idp_pk(), mit_u))
            return make_abort(m.session_id, AbortCode::kBadEndorsement);
        if (!scheme::pver(p_, mit_u.pk,
                          tuple_of(av.sigma, av.h, av.vid->M, av.vid->R), mit_u.pk))
            return make_abort(m.session_id, AbortCode::kBadSignature);

        DelegSession s;
        s.claimed = av;
        s.mit_u = mit_u;
        s.challenge = rng_.bytes(kChallengeBytes);
        Message reply{m.session_id, Step::kDelegateChallenge,
                      encode_body(KeyedChallengeBody{creds_.sn, s.challenge})};
        s.log.push_back(m);
        s.log.push_back(reply);
        sessions_[m.session_id] = std::move(s);
        return reply;
    }
    if (m.step == Step::kDelegateResponse) {
        auto it = sessions_.find(m.session_id);
        if (it == sessions_.end() || it->second.expect != Step::kDelegateResponse)
            return make_abort(m.session_id, AbortCode::kOutOfOrder);
        DelegSession s = std::move(it->second);
        sessions_.erase(it);  // terminal either way

        DelegateResponseBody b;
        Bytes feature_raw, chal;
        try {
            b = decode_delegate_response(p_, m.body);
            std::tie(feature_raw, chal) = split_m_prime(b.M_prime);
        } catch (const CodecError&) {
            return make_abort(m.session_id, AbortCode::kMalformed);
        }
        if (chal != s.challenge || spent_challenges_.count(chal))
            return make_abort(m.session_id, AbortCode::kStaleChallenge);
        spent_challenges_.insert(chal);

        biometric::IrisFeature feat;
        try {
            feat = biometric::feature_from_bytes(feature_raw);
        } catch (const CodecError&) {
            return make_abort(m.session_id, AbortCode::kMalformed);
        }
        if (!biometric::match(feat, s.mit_u.T))
            return make_abort(m.session_id, AbortCode::kIrisMismatch);
        if (!scheme::pver(p_, s.mit_u.pk,
                          tuple_of(b.sigma_p, b.h_p, b.M_prime, b.R_prime),
                          creds_.kp.pk))
            return make_abort(m.session_id, AbortCode::kBadSignature);

        // Rewrite the delegation hash onto the avatar description under the
        // proxy key, then push the hand-over to the server.
        const Bytes& M = s.claimed.vid->M;
        bilinear::GroupElement R_p = scheme::psig(p_, creds_.kp.sk, b.h_p, M);
        DelegateTransferBody tr;
        tr.aid = s.claimed.aid;
        tr.sn_p = creds_.sn;
        tr.sigma_p = b.sigma_p;
        tr.h_p = b.h_p;
        tr.M = M;
        tr.R = R_p;
        Message transfer{fresh_sid(rng_), Step::kDelegateTransfer,
                         encode_body(p_, tr)};
        Message verdict = server_.exchange(transfer);
        if (verdict.step != Step::kDelegateAccept) {
            auto code = abort_code(verdict);
            return make_abort(m.session_id,
                              code ? *code : AbortCode::kMalformed);
        }
        AcceptBody acc;
        Avatar updated;
        try {
            acc = decode_accept(verdict.body);
            updated = identity::decode_avatar(p_, acc.avatar_enc);
        } catch (const CodecError&) {
            return make_abort(m.session_id, AbortCode::kMalformed);
        }

        Message reply{m.session_id, Step::kDelegateAccept,
                      encode_body(AcceptBody{acc.avatar_enc, {}})};
        DelegationRecord rec;
        rec.avatar = updated;
        rec.pid = identity::PID{b.M_prime, b.R_prime};
        rec.transcript.messages = std::move(s.log);
        rec.transcript.add(m);
        rec.transcript.add(reply);
        rec.transcript.terminal_status = ProtocolTranscript::kAccepted;
        records_[updated.aid] = std::move(rec);
        return reply;
    }
    return make_abort(m.session_id, AbortCode::kOutOfOrder);
}

// ---------------------------------------------------------------------------
// VerifierParty

VerifierParty::VerifierParty(const bilinear::Params& p, registry::Registry& reg,
                             UserCreds creds, RandomSource& rng)
    : p_(p), reg_(reg), creds_(std::move(creds)), rng_(rng) {}

Message VerifierParty::finish_abort(const SessionId& sid, AbortCode code) {
    sessions_.erase(sid);
    return make_abort(sid, code);
}

Message VerifierParty::handle(const Message& m) {
    std::lock_guard lk(mu_);
    if (m.step == Step::kAbort) {
        sessions_.erase(m.session_id);
        return m;
    }
    if (m.step == Step::kMutualClaim) {
        if (sessions_.count(m.session_id))
            return make_abort(m.session_id, AbortCode::kOutOfOrder);
        DelegateClaimBody b;
        Avatar av;
        try {
            b = decode_delegate_claim(m.body);
            av = identity::decode_avatar(p_, b.avatar_enc);
        } catch (const CodecError&) {
            return make_abort(m.session_id, AbortCode::kMalformed);
        }
        if (!av.vid) return make_abort(m.session_id, AbortCode::kMalformed);
        const bool human = identity::driver_type(av) == DriverType::kHuman;
        MIT mit_u, mit_d;
        try {
            mit_u = reg_.get_mit(av.sn_u);
            mit_d = human ? mit_u : reg_.get_mit(av.sn_p);
        } catch (const registry::UnknownSn&) {
            return make_abort(m.session_id, AbortCode::kUnknownSn);
        }
        if (!cache_.check(p_, reg_.idp_pk(), mit_u) ||
            (!human && !cache_.check(p_, reg_.idp_pk(), mit_d)))
            return make_abort(m.session_id, AbortCode::kBadEndorsement);
        if (!scheme::pver(p_, mit_u.pk,
                          tuple_of(av.sigma, av.h, av.vid->M, av.vid->R), mit_d.pk))
            return make_abort(m.session_id, AbortCode::kBadSignature);

        MutualSession s;
        s.avatar = av;
        s.mit_u = mit_u;
        s.mit_d = mit_d;
        s.challenge = rng_.bytes(kChallengeBytes);
        Message reply{m.session_id, Step::kMutualChallenge,
                      encode_body(KeyedChallengeBody{creds_.sn, s.challenge})};
        s.log.push_back(m);
        s.log.push_back(reply);
        sessions_[m.session_id] = std::move(s);
        return reply;
    }
    if (m.step == Step::kMutualResponse) {
        auto it = sessions_.find(m.session_id);
        if (it == sessions_.end() || it->second.expect != Step::kMutualResponse)
            return make_abort(m.session_id, AbortCode::kOutOfOrder);
        MutualSession& s = it->second;
        const bool human = identity::driver_type(s.avatar) == DriverType::kHuman;

        PidBody b;
        Bytes feature_raw, chal;
        try {
            b = decode_pid_body(p_, m.body);
            std::tie(feature_raw, chal) = split_m_prime(b.M_prime);
        } catch (const CodecError&) {
            return finish_abort(m.session_id, AbortCode::kMalformed);
        }
        if (human) {
            // A fresh capture must answer this session's challenge. An
            // AI-driven avatar instead presents the delegation-time capture,
            // whose embedded challenge belongs to that earlier session;
            // freshness there comes from the transcript-bound key exchange.
            if (chal != s.challenge || spent_challenges_.count(chal))
                return finish_abort(m.session_id, AbortCode::kStaleChallenge);
            spent_challenges_.insert(chal);
        }
        biometric::IrisFeature feat;
        try {
            feat = biometric::feature_from_bytes(feature_raw);
        } catch (const CodecError&) {
            return finish_abort(m.session_id, AbortCode::kMalformed);
        }
        // Always the original manipulator's enrolled template: tracing works
        // because even an AI-driven avatar answers with its manipulator's eye.
        if (!biometric::match(feat, s.mit_u.T))
            return finish_abort(m.session_id, AbortCode::kIrisMismatch);
        if (!scheme::pver(p_, s.mit_u.pk,
                          tuple_of(s.avatar.sigma, s.avatar.h, b.M_prime, b.R_prime),
                          s.mit_d.pk))
            return finish_abort(m.session_id, AbortCode::kBadSignature);

        s.w2 = p_.random_nonzero_scalar(rng_);
        KeyShareBody ks;
        ks.share = p_.pow(p_.generator(bilinear::Group::kG), s.w2);
        s.log.push_back(m);
        ks.binding = transcript_digest(s.log, s.log.size());  // claim..response
        Message reply{m.session_id, Step::kMutualKeyVerifier, encode_body(p_, ks)};
        s.log.push_back(reply);
        s.expect = Step::kMutualKeyProver;
        return reply;
    }
    if (m.step == Step::kMutualKeyProver) {
        auto it = sessions_.find(m.session_id);
        if (it == sessions_.end() || it->second.expect != Step::kMutualKeyProver)
            return make_abort(m.session_id, AbortCode::kOutOfOrder);
        MutualSession s = std::move(it->second);
        sessions_.erase(it);  // terminal either way

        KeyShareBody b;
        try {
            b = decode_key_share(p_, m.body);
        } catch (const CodecError&) {
            return make_abort(m.session_id, AbortCode::kMalformed);
        }
        if (b.binding != transcript_digest(s.log, s.log.size()))  // claim..key-share
            return make_abort(m.session_id, AbortCode::kBadTranscriptDigest);

        const bool human = identity::driver_type(s.avatar) == DriverType::kHuman;
        const bilinear::GroupElement& y_driver =
            human ? s.mit_u.pk.y1 : s.mit_d.pk.y1;
        bilinear::GroupElement key =
            p_.mul(p_.pow(y_driver, s.w2), p_.pow(b.share, creds_.kp.sk));

        Message accept{m.session_id, Step::kMutualAccept,
                       encode_body(AcceptBody{{}, {}})};
        RetainedSession kept;
        kept.sid = m.session_id;
        kept.avatar = s.avatar;
        kept.transcript.messages = std::move(s.log);
        kept.transcript.add(m);
        kept.transcript.add(accept);
        kept.transcript.terminal_status = ProtocolTranscript::kAccepted;
        kept.key = key;
        kept.w2 = s.w2;
        retained_.push_back(std::move(kept));
        return accept;
    }
    return make_abort(m.session_id, AbortCode::kOutOfOrder);
}

// ---------------------------------------------------------------------------
// Client runners

LoginResult run_login(const bilinear::Params& p, const UserCreds& user,
                      BytesView aid, BytesView M, Endpoint& server,
                      const ClientOptions& opts, RandomSource& rng) {
    ProtocolTranscript t;
    SessionId sid = fresh_sid(rng);

    scheme::ChameleonTuple tup = scheme::dgen(p, user.kp.sk, M, user.kp.pk, rng);
    LoginClaimBody claim;
    claim.sn_u = user.sn;
    claim.aid = Bytes(aid.begin(), aid.end());
    claim.sigma = *tup.sigma;
    claim.h = tup.h;
    claim.M = Bytes(M.begin(), M.end());
    claim.R = tup.R;

    Message reply1 = expect_step(t, server,
                                 Message{sid, Step::kLoginClaim, encode_body(p, claim)},
                                 Step::kLoginChallenge);
    Bytes challenge;
    try {
        challenge = decode_challenge(reply1.body).c;
    } catch (const CodecError&) {
        bail_local(t, sid, AbortCode::kMalformed);
    }

    capture_pause(opts);
    biometric::IrisFeature feat = biometric::sample(user.tpl, opts.iris_noise, rng);
    Bytes m_prime = biometric::feature_bytes(feat);
    m_prime.insert(m_prime.end(), challenge.begin(), challenge.end());
    PidBody pid;
    pid.M_prime = std::move(m_prime);
    pid.R_prime = scheme::psig(p, user.kp.sk, tup.h, pid.M_prime);

    Message reply2 = expect_step(t, server,
                                 Message{sid, Step::kLoginResponse, encode_body(p, pid)},
                                 Step::kLoginAccept);
    LoginResult out;
    try {
        AcceptBody acc = decode_accept(reply2.body);
        out.avatar = identity::decode_avatar(p, acc.avatar_enc);
        if (acc.token.size() != kTokenBytes) throw CodecError("missing session token");
        out.token = acc.token;
    } catch (const CodecError&) {
        bail_local(t, sid, AbortCode::kMalformed);
    }
    t.terminal_status = ProtocolTranscript::kAccepted;
    out.transcript = std::move(t);
    return out;
}

DelegateResult run_delegate(const bilinear::Params& p, registry::Registry& reg,
                            const UserCreds& user, const Avatar& current,
                            Endpoint& proxy, const ClientOptions& opts,
                            RandomSource& rng) {
    ProtocolTranscript t;
    SessionId sid = fresh_sid(rng);

    DelegateClaimBody claim{identity::encode_avatar(p, current)};
    Message reply1 = expect_step(t, proxy,
                                 Message{sid, Step::kDelegateClaim, encode_body(claim)},
                                 Step::kDelegateChallenge);
    KeyedChallengeBody ch;
    try {
        ch = decode_keyed_challenge(reply1.body);
    } catch (const CodecError&) {
        bail_local(t, sid, AbortCode::kMalformed);
    }

    // The proxy names its identity record; sign toward that key only after
    // the issuer endorsement checks out.
    MIT mit_p;
    try {
        mit_p = reg.get_mit(ch.sn);
    } catch (const registry::UnknownSn&) {
        bail_local(t, sid, AbortCode::kUnknownSn);
    }
    if (!identity::verify_endorsement(p, reg.idp_pk(), mit_p))
        bail_local(t, sid, AbortCode::kBadEndorsement);

    capture_pause(opts);
    biometric::IrisFeature feat = biometric::sample(user.tpl, opts.iris_noise, rng);
    Bytes m_prime = biometric::feature_bytes(feat);
    m_prime.insert(m_prime.end(), ch.c.begin(), ch.c.end());
    scheme::ChameleonTuple tup = scheme::dgen(p, user.kp.sk, m_prime, mit_p.pk, rng);

    DelegateResponseBody resp;
    resp.sigma_p = *tup.sigma;
    resp.h_p = tup.h;
    resp.M_prime = std::move(m_prime);
    resp.R_prime = tup.R;

    Message reply2 = expect_step(t, proxy,
                                 Message{sid, Step::kDelegateResponse, encode_body(p, resp)},
                                 Step::kDelegateAccept);
    DelegateResult out;
    try {
        AcceptBody acc = decode_accept(reply2.body);
        out.avatar = identity::decode_avatar(p, acc.avatar_enc);
    } catch (const CodecError&) {
        bail_local(t, sid, AbortCode::kMalformed);
    }
    t.terminal_status = ProtocolTranscript::kAccepted;
    out.transcript = std::move(t);
    return out;
}

MutualResult run_mutual(const bilinear::Params& p, registry::Registry& reg,
                        const ProverContext& prover, Endpoint& verifier,
                        const ClientOptions& opts, RandomSource& rng) {
    ProtocolTranscript t;
    SessionId sid = fresh_sid(rng);
    const bool human =
        identity::driver_type(prover.avatar) == DriverType::kHuman;

    DelegateClaimBody claim{identity::encode_avatar(p, prover.avatar)};
    Message reply1 = expect_step(t, verifier,
                                 Message{sid, Step::kMutualClaim, encode_body(claim)},
                                 Step::kMutualChallenge);
    KeyedChallengeBody ch;
    try {
        ch = decode_keyed_challenge(reply1.body);
    } catch (const CodecError&) {
        bail_local(t, sid, AbortCode::kMalformed);
    }
    MIT mit_b;
    try {
        mit_b = reg.get_mit(ch.sn);
    } catch (const registry::UnknownSn&) {
        bail_local(t, sid, AbortCode::kUnknownSn);
    }
    if (!identity::verify_endorsement(p, reg.idp_pk(), mit_b))
        bail_local(t, sid, AbortCode::kBadEndorsement);

    PidBody pid;
    if (human) {
        if (!prover.tpl) bail_local(t, sid, AbortCode::kUnknownDriverKeys);
        capture_pause(opts);
        biometric::IrisFeature feat =
            biometric::sample(*prover.tpl, opts.iris_noise, rng);
        Bytes m_prime = biometric::feature_bytes(feat);
        m_prime.insert(m_prime.end(), ch.c.begin(), ch.c.end());
        pid.M_prime = std::move(m_prime);
        pid.R_prime = scheme::psig(p, prover.driver_kp.sk, prover.avatar.h,
                                   pid.M_prime);
    } else {
        // AI proxies replay the delegation-time capture presentation; they
        // hold no iris and could not answer a fresh challenge.
        if (!prover.stored_pid) bail_local(t, sid, AbortCode::kUnknownDriverKeys);
        pid.M_prime = prover.stored_pid->M_prime;
        pid.R_prime = prover.stored_pid->R_prime;
    }

    Message reply2 = expect_step(t, verifier,
                                 Message{sid, Step::kMutualResponse, encode_body(p, pid)},
                                 Step::kMutualKeyVerifier);
    KeyShareBody their;
    try {
        their = decode_key_share(p, reply2.body);
    } catch (const CodecError&) {
        bail_local(t, sid, AbortCode::kMalformed);
    }
    if (their.binding != transcript_digest(t.messages, 3))
        bail_local(t, sid, AbortCode::kBadTranscriptDigest);

    bilinear::FieldScalar w1 = p.random_nonzero_scalar(rng);
    bilinear::GroupElement key = p.mul(p.pow(their.share, prover.driver_kp.sk),
                                       p.pow(mit_b.pk.y1, w1));
    KeyShareBody mine;
    mine.share = p.pow(p.generator(bilinear::Group::kG), w1);
    mine.binding = transcript_digest(t.messages, 4);

    expect_step(t, verifier,
                Message{sid, Step::kMutualKeyProver, encode_body(p, mine)},
                Step::kMutualAccept);
    t.terminal_status = ProtocolTranscript::kAccepted;
    return MutualResult{key, w1, std::move(t)};
}

}  // namespace cps::protocol
