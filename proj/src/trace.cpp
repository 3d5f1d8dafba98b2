#include "cps/parties.hpp"

namespace cps::protocol {

namespace {

using identity::Avatar;
using identity::DriverType;
using identity::MIT;

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

// Last capture presentation carried by a transcript, whatever the protocol.
std::optional<identity::PID> extract_pid(const bilinear::Params& p,
                                         const ProtocolTranscript& t) {
    std::optional<identity::PID> found;
    for (const Message& m : t.messages) {
        try {
            if (m.step == Step::kLoginResponse || m.step == Step::kMutualResponse) {
                PidBody b = decode_pid_body(p, m.body);
                found = identity::PID{b.M_prime, b.R_prime};
            } else if (m.step == Step::kDelegateResponse) {
                DelegateResponseBody b = decode_delegate_response(p, m.body);
                found = identity::PID{b.M_prime, b.R_prime};
            }
        } catch (const CodecError&) {
            return std::nullopt;
        }
    }
    return found;
}

}  // namespace

Bytes encode_trace_evidence(const bilinear::Params& p, const TraceEvidence& ev) {
    ByteWriter w;
    w.blob(identity::encode_avatar(p, ev.avatar));
    w.blob(encode_transcript(ev.transcript));
    w.fixed(BytesView(ev.interaction_digest.data(), ev.interaction_digest.size()));
    return w.take();
}

TraceEvidence decode_trace_evidence(const bilinear::Params& p, BytesView b) {
    ByteReader r(b);
    TraceEvidence ev;
    ev.avatar = identity::decode_avatar(p, r.blob());
    ev.transcript = decode_transcript(r.blob());
    Bytes d = r.fixed(ev.interaction_digest.size());
    std::copy(d.begin(), d.end(), ev.interaction_digest.begin());
    r.expect_end();
    return ev;
}

Tracer::Tracer(const bilinear::Params& p, registry::Registry& reg,
               std::string authority_token)
    : p_(p), reg_(reg), token_(std::move(authority_token)) {}

TraceReport Tracer::trace(const TraceEvidence& ev) {
    TraceReport rep;
    auto check = [&rep](const char* name, bool ok, AbortCode fail) {
        rep.checks.emplace_back(name, ok);
        if (!ok) throw TraceRejected(fail);
    };

    const Avatar& av = ev.avatar;
    rep.driver = identity::driver_type(av);
    const bool human = rep.driver == DriverType::kHuman;
    check("virtual-identity-present", av.vid.has_value(), AbortCode::kMalformed);

    // Fresh record fetches: one for a human-driven avatar, a second for the
    // proxy behind an AI-driven one.
    MIT mit_u = reg_.get_mit(av.sn_u);
    ++rep.mit_fetches;
    check("manipulator-record-endorsed", cache_.check(p_, reg_.idp_pk(), mit_u),
          AbortCode::kBadEndorsement);
    MIT mit_d = mit_u;
    if (!human) {
        mit_d = reg_.get_mit(av.sn_p);
        ++rep.mit_fetches;
        check("driver-record-endorsed", cache_.check(p_, reg_.idp_pk(), mit_d),
              AbortCode::kBadEndorsement);
    }

    check("virtual-identity-signature",
          scheme::pver(p_, mit_u.pk,
                       tuple_of(av.sigma, av.h, av.vid->M, av.vid->R), mit_d.pk),
          AbortCode::kBadSignature);

    std::optional<identity::PID> pid = extract_pid(p_, ev.transcript);
    check("physical-identity-present", pid.has_value(), AbortCode::kMalformed);

    check("physical-identity-signature",
          scheme::pver(p_, mit_u.pk,
                       tuple_of(av.sigma, av.h, pid->M_prime, pid->R_prime),
                       mit_d.pk),
          AbortCode::kBadSignature);

    Bytes feature_raw, chal;
    biometric::IrisFeature feat;
    bool well_formed = true;
    try {
        std::tie(feature_raw, chal) = split_m_prime(pid->M_prime);
        feat = biometric::feature_from_bytes(feature_raw);
    } catch (const CodecError&) {
        well_formed = false;
    }
    check("capture-well-formed", well_formed, AbortCode::kMalformed);
    // Even an AI-driven avatar carries its original manipulator's eye: the
    // delegation capture was verified against the same enrollment.
    check("capture-matches-enrollment", biometric::match(feat, mit_u.T),
          AbortCode::kIrisMismatch);

    rep.manipulator = reg_.resolve_sn(av.sn_u, token_);
    return rep;
}

// ---------------------------------------------------------------------------
// Transcript replay

namespace {

struct Replayer {
    const bilinear::Params& p;
    registry::Registry& reg;
    registry::EndorsementCache& cache;
    std::vector<ReplayDecision> out;

    bool note(const char* name, bool ok) {
        out.push_back({name, ok});
        return ok;
    }
    bool endorsed(const char* name, const identity::SerialNumber& sn, MIT& mit) {
        try {
            mit = reg.get_mit(sn);
        } catch (const registry::UnknownSn&) {
            return note(name, false);
        }
        return note(name, cache.check(p, reg.idp_pk(), mit));
    }
};

// The message at position i, if the transcript got that far and the step is
// the expected one. Aborted sessions simply end the walk.
const Message* at(const ProtocolTranscript& t, size_t i, Step want) {
    if (i >= t.messages.size()) return nullptr;
    if (t.messages[i].step != want) return nullptr;
    return &t.messages[i];
}

void replay_login(Replayer& rp, const ProtocolTranscript& t) {
    const Message* claim_msg = at(t, 0, Step::kLoginClaim);
    LoginClaimBody claim;
    try {
        claim = decode_login_claim(rp.p, claim_msg->body);
    } catch (const CodecError&) {
        rp.note("claim-decodes", false);
        return;
    }
    rp.note("claim-decodes", true);
    MIT mit;
    if (!rp.endorsed("manipulator-record-endorsed", claim.sn_u, mit)) return;
    if (!rp.note("description-signature",
                 scheme::pver(rp.p, mit.pk,
                              tuple_of(claim.sigma, claim.h, claim.M, claim.R),
                              mit.pk)))
        return;

    const Message* ch_msg = at(t, 1, Step::kLoginChallenge);
    if (!ch_msg) return;
    const Message* resp_msg = at(t, 2, Step::kLoginResponse);
    if (!resp_msg) return;
    Bytes challenge, feature_raw, chal;
    PidBody resp;
    biometric::IrisFeature feat;
    try {
        challenge = decode_challenge(ch_msg->body).c;
        resp = decode_pid_body(rp.p, resp_msg->body);
        std::tie(feature_raw, chal) = split_m_prime(resp.M_prime);
        feat = biometric::feature_from_bytes(feature_raw);
    } catch (const CodecError&) {
        rp.note("response-decodes", false);
        return;
    }
    rp.note("response-decodes", true);
    if (!rp.note("challenge-bound", chal == challenge)) return;
    if (!rp.note("capture-matches", biometric::match(feat, mit.T))) return;
    rp.note("capture-signature",
            scheme::pver(rp.p, mit.pk,
                         tuple_of(claim.sigma, claim.h, resp.M_prime, resp.R_prime),
                         mit.pk));
}

void replay_delegate(Replayer& rp, const ProtocolTranscript& t) {
    const Message* claim_msg = at(t, 0, Step::kDelegateClaim);
    Avatar av;
    try {
        av = identity::decode_avatar(rp.p, decode_delegate_claim(claim_msg->body).avatar_enc);
        if (!av.vid) throw CodecError("claimed avatar lacks a description");
    } catch (const CodecError&) {
        rp.note("claim-decodes", false);
        return;
    }
    rp.note("claim-decodes", true);
    MIT mit_u;
    if (!rp.endorsed("manipulator-record-endorsed", av.sn_u, mit_u)) return;
    if (!rp.note("description-signature",
                 scheme::pver(rp.p, mit_u.pk,
                              tuple_of(av.sigma, av.h, av.vid->M, av.vid->R),
                              mit_u.pk)))
        return;

    const Message* ch_msg = at(t, 1, Step::kDelegateChallenge);
    if (!ch_msg) return;
    KeyedChallengeBody ch;
    try {
        ch = decode_keyed_challenge(ch_msg->body);
    } catch (const CodecError&) {
        rp.note("challenge-decodes", false);
        return;
    }
    rp.note("challenge-decodes", true);
    MIT mit_p;
    if (!rp.endorsed("proxy-record-endorsed", ch.sn, mit_p)) return;

    const Message* resp_msg = at(t, 2, Step::kDelegateResponse);
    if (!resp_msg) return;
    DelegateResponseBody resp;
    Bytes feature_raw, chal;
    biometric::IrisFeature feat;
    try {
        resp = decode_delegate_response(rp.p, resp_msg->body);
        std::tie(feature_raw, chal) = split_m_prime(resp.M_prime);
        feat = biometric::feature_from_bytes(feature_raw);
    } catch (const CodecError&) {
        rp.note("response-decodes", false);
        return;
    }
    rp.note("response-decodes", true);
    if (!rp.note("challenge-bound", chal == ch.c)) return;
    if (!rp.note("capture-matches", biometric::match(feat, mit_u.T))) return;
    if (!rp.note("delegation-signature",
                 scheme::pver(rp.p, mit_u.pk,
                              tuple_of(resp.sigma_p, resp.h_p, resp.M_prime,
                                       resp.R_prime),
                              mit_p.pk)))
        return;

    const Message* acc_msg = at(t, 3, Step::kDelegateAccept);
    if (!acc_msg) return;
    Avatar updated;
    try {
        updated = identity::decode_avatar(rp.p, decode_accept(acc_msg->body).avatar_enc);
        if (!updated.vid) throw CodecError("updated avatar lacks a description");
    } catch (const CodecError&) {
        rp.note("accept-decodes", false);
        return;
    }
    rp.note("accept-decodes", true);
    if (!rp.note("description-preserved", updated.vid->M == av.vid->M)) return;
    rp.note("transfer-signature",
            scheme::pver(rp.p, mit_u.pk,
                         tuple_of(updated.sigma, updated.h, updated.vid->M,
                                  updated.vid->R),
                         mit_p.pk));
}

void replay_mutual(Replayer& rp, const ProtocolTranscript& t) {
    const Message* claim_msg = at(t, 0, Step::kMutualClaim);
    Avatar av;
    try {
        av = identity::decode_avatar(rp.p, decode_delegate_claim(claim_msg->body).avatar_enc);
        if (!av.vid) throw CodecError("claimed avatar lacks a description");
    } catch (const CodecError&) {
        rp.note("claim-decodes", false);
        return;
    }
    rp.note("claim-decodes", true);
    const bool human = identity::driver_type(av) == DriverType::kHuman;
    MIT mit_u, mit_d;
    if (!rp.endorsed("manipulator-record-endorsed", av.sn_u, mit_u)) return;
    if (human) {
        mit_d = mit_u;
    } else if (!rp.endorsed("driver-record-endorsed", av.sn_p, mit_d)) {
        return;
    }
    if (!rp.note("description-signature",
                 scheme::pver(rp.p, mit_u.pk,
                              tuple_of(av.sigma, av.h, av.vid->M, av.vid->R),
                              mit_d.pk)))
        return;

    const Message* ch_msg = at(t, 1, Step::kMutualChallenge);
    if (!ch_msg) return;
    KeyedChallengeBody ch;
    try {
        ch = decode_keyed_challenge(ch_msg->body);
    } catch (const CodecError&) {
        rp.note("challenge-decodes", false);
        return;
    }
    rp.note("challenge-decodes", true);

    const Message* resp_msg = at(t, 2, Step::kMutualResponse);
    if (!resp_msg) return;
    PidBody resp;
    Bytes feature_raw, chal;
    biometric::IrisFeature feat;
    try {
        resp = decode_pid_body(rp.p, resp_msg->body);
        std::tie(feature_raw, chal) = split_m_prime(resp.M_prime);
        feat = biometric::feature_from_bytes(feature_raw);
    } catch (const CodecError&) {
        rp.note("response-decodes", false);
        return;
    }
    rp.note("response-decodes", true);
    if (human && !rp.note("challenge-bound", chal == ch.c)) return;
    if (!rp.note("capture-matches", biometric::match(feat, mit_u.T))) return;
    if (!rp.note("capture-signature",
                 scheme::pver(rp.p, mit_u.pk,
                              tuple_of(av.sigma, av.h, resp.M_prime, resp.R_prime),
                              mit_d.pk)))
        return;

    const Message* kv_msg = at(t, 3, Step::kMutualKeyVerifier);
    if (!kv_msg) return;
    KeyShareBody kv;
    try {
        kv = decode_key_share(rp.p, kv_msg->body);
    } catch (const CodecError&) {
        rp.note("verifier-share-decodes", false);
        return;
    }
    rp.note("verifier-share-decodes", true);
    if (!rp.note("verifier-binding",
                 kv.binding == transcript_digest(t.messages, 3)))
        return;

    const Message* kp_msg = at(t, 4, Step::kMutualKeyProver);
    if (!kp_msg) return;
    KeyShareBody kp;
    try {
        kp = decode_key_share(rp.p, kp_msg->body);
    } catch (const CodecError&) {
        rp.note("prover-share-decodes", false);
        return;
    }
    rp.note("prover-share-decodes", true);
    rp.note("prover-binding", kp.binding == transcript_digest(t.messages, 4));
}

}  // namespace

std::vector<ReplayDecision> replay_transcript(const bilinear::Params& p,
                                              registry::Registry& reg,
                                              registry::EndorsementCache& cache,
                                              const ProtocolTranscript& t) {
    Replayer rp{p, reg, cache, {}};
    if (t.messages.empty()) {
        rp.note("non-empty", false);
        return rp.out;
    }
    switch (t.messages[0].step) {
        case Step::kLoginClaim:
            replay_login(rp, t);
            break;
        case Step::kDelegateClaim:
            replay_delegate(rp, t);
            break;
        case Step::kMutualClaim:
            replay_mutual(rp, t);
            break;
        default:
            rp.note("recognized-protocol", false);
            break;
    }
    return rp.out;
}

}  // namespace cps::protocol
