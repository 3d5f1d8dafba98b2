#pragma once

#include <optional>
#include <vector>

#include "cps/hash.hpp"
#include "cps/identity.hpp"

namespace cps::protocol {

using SessionId = std::array<uint8_t, 16>;

inline constexpr size_t kChallengeBytes = 32;
inline constexpr size_t kTokenBytes = 16;

// Every step has a fixed sender, so direction never travels on the wire.
enum class Step : uint8_t {
    kLoginClaim = 0x10,
    kLoginChallenge = 0x11,
    kLoginResponse = 0x12,
    kLoginAccept = 0x13,

    kDelegateClaim = 0x20,
    kDelegateChallenge = 0x21,
    kDelegateResponse = 0x22,
    kDelegateTransfer = 0x23,
    kDelegateAccept = 0x24,

    kMutualClaim = 0x30,
    kMutualChallenge = 0x31,
    kMutualResponse = 0x32,
    kMutualKeyVerifier = 0x33,
    kMutualKeyProver = 0x34,
    kMutualAccept = 0x35,

    kAbort = 0x7f,
};

// One code per distinct failure family; an abort message carries exactly one.
enum class AbortCode : uint8_t {
    kUnknownSn = 1,            // serial number not on the ledger
    kBadEndorsement = 2,       // identity record fails the issuer check
    kBadSignature = 3,         // a signature verification equation failed
    kStaleChallenge = 4,       // challenge absent, already spent, or mismatched
    kIrisMismatch = 5,         // capture does not match the enrolled template
    kUnknownAvatar = 6,        // no avatar record under the claimed aid
    kVidBindingMismatch = 7,   // delegated description differs from the stored one
    kSessionInvalid = 8,       // missing/expired session token (forced offline)
    kOutOfOrder = 9,           // message outside the session state machine
    kBadTranscriptDigest = 10, // key exchange not bound to this transcript
    kUnknownDriverKeys = 11,   // prover lacks key material for this avatar
    kMalformed = 12,           // body undecodable or structurally invalid
};

const char* abort_name(AbortCode c);

struct Message {
    SessionId session_id{};
    Step step = Step::kAbort;
    Bytes body;
};

// wire form: session_id(16) || step(1) || length(4, big-endian) || body
Bytes frame(const Message& m);
Message unframe(ByteReader& r);
Message unframe_bytes(BytesView b);  // exactly one frame

Message make_abort(const SessionId& sid, AbortCode code);
// Decodes the code of an abort message; empty for any other step.
std::optional<AbortCode> abort_code(const Message& m);

// Ordered record of one session: the exchanged messages plus how it ended.
struct ProtocolTranscript {
    enum Status : uint8_t { kIncomplete = 0, kAccepted = 1, kAborted = 2 };
    std::vector<Message> messages;
    uint8_t terminal_status = kIncomplete;
    void add(const Message& m) { messages.push_back(m); }
};

// file form: framed messages back to back, then one terminal status byte
Bytes encode_transcript(const ProtocolTranscript& t);
ProtocolTranscript decode_transcript(BytesView b);

// Digest over the frames of messages[0..count): binds the key exchange to
// everything said earlier in the session (challenge included).
Digest transcript_digest(const std::vector<Message>& messages, size_t count);

// ---- step body codecs ----------------------------------------------------
// Exposed so tests can build, inspect, and tamper with protocol traffic.

struct LoginClaimBody {
    identity::SerialNumber sn_u{};
    Bytes aid;
    bilinear::GroupElement sigma, h;
    Bytes M;                      // avatar description
    bilinear::GroupElement R;     // description check parameter
};

struct ChallengeBody {
    Bytes c;  // kChallengeBytes
};

struct KeyedChallengeBody {
    identity::SerialNumber sn{};  // responder's identity record
    Bytes c;
};

struct PidBody {
    Bytes M_prime;  // iris feature || challenge
    bilinear::GroupElement R_prime;
};

struct DelegateClaimBody {
    Bytes avatar_enc;
};

struct DelegateResponseBody {
    bilinear::GroupElement sigma_p, h_p;
    Bytes M_prime;
    bilinear::GroupElement R_prime;
};

struct DelegateTransferBody {
    Bytes aid;
    identity::SerialNumber sn_p{};
    bilinear::GroupElement sigma_p, h_p;
    Bytes M;  // must equal the stored avatar description
    bilinear::GroupElement R;
};

struct AcceptBody {
    Bytes avatar_enc;
    Bytes token;  // empty when no session token is issued
};

struct KeyShareBody {
    bilinear::GroupElement share;  // g^{w1} or g^{w2}
    Digest binding{};              // transcript digest up to this message
};

Bytes encode_body(const bilinear::Params& p, const LoginClaimBody& b);
LoginClaimBody decode_login_claim(const bilinear::Params& p, BytesView b);

Bytes encode_body(const ChallengeBody& b);
ChallengeBody decode_challenge(BytesView b);

Bytes encode_body(const KeyedChallengeBody& b);
KeyedChallengeBody decode_keyed_challenge(BytesView b);

Bytes encode_body(const bilinear::Params& p, const PidBody& b);
PidBody decode_pid_body(const bilinear::Params& p, BytesView b);

Bytes encode_body(const DelegateClaimBody& b);
DelegateClaimBody decode_delegate_claim(BytesView b);

Bytes encode_body(const bilinear::Params& p, const DelegateResponseBody& b);
DelegateResponseBody decode_delegate_response(const bilinear::Params& p, BytesView b);

Bytes encode_body(const bilinear::Params& p, const DelegateTransferBody& b);
DelegateTransferBody decode_delegate_transfer(const bilinear::Params& p, BytesView b);

Bytes encode_body(const AcceptBody& b);
AcceptBody decode_accept(BytesView b);

Bytes encode_body(const bilinear::Params& p, const KeyShareBody& b);
KeyShareBody decode_key_share(const bilinear::Params& p, BytesView b);

// splits M' into (feature bytes, challenge); throws CodecError on bad length
std::pair<Bytes, Bytes> split_m_prime(BytesView m_prime);

}  // namespace cps::protocol
