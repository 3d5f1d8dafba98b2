#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <set>

#include "cps/registry.hpp"
#include "cps/transport.hpp"

namespace cps::protocol {

// Raised by client runners when either side aborts a session; carries the
// distinct failure code and the transcript up to (and including) the abort.
struct ProtocolAbort : std::runtime_error {
    ProtocolAbort(AbortCode c, ProtocolTranscript t)
        : std::runtime_error(std::string("protocol abort: ") + abort_name(c)),
          code(c),
          transcript(std::move(t)) {}
    AbortCode code;
    ProtocolTranscript transcript;
};

// Long-term credentials of one registered participant (human or AI proxy).
struct UserCreds {
    identity::UserId id;
    scheme::KeyPair kp;
    identity::SerialNumber sn{};
    biometric::IrisTemplate tpl;
};

struct ClientOptions {
    double iris_noise = 0.05;  // per-bit flip probability of a fresh capture
    unsigned iris_delay_ms = 0;  // artificial capture latency stand-in
};

// ---------------------------------------------------------------------------
// Server: holds avatar records, answers login claims, and executes delegation
// transfers. One mutex serializes record/nonce mutation; sessions are
// sequential state machines keyed by session id.
class Server : public Handler {
  public:
    Server(const bilinear::Params& p, registry::Registry& reg, RandomSource& rng);

    // Pre-login provisioning: an empty avatar record (sn_u, aid).
    // Throws std::invalid_argument if the aid is already taken.
    void register_slot(const identity::SerialNumber& sn_u, BytesView aid);
    bool has_slot(BytesView aid) const;
    std::optional<identity::Avatar> avatar_record(BytesView aid) const;
    bool token_valid(BytesView aid, BytesView token) const;

    Message handle(const Message& m) override;

    // Slot persistence for multi-process CLI runs.
    void save_slots(const std::filesystem::path& path) const;
    void load_slots(const std::filesystem::path& path);

  private:
    struct Slot {
        identity::SerialNumber sn_u{};
        Bytes aid;
        std::optional<identity::Avatar> av;
        Bytes token;  // empty = no active human session
    };
    struct LoginSession {
        Step expect = Step::kLoginResponse;
        LoginClaimBody claim;
        identity::MIT mit;
        Bytes challenge;
    };

    Message handle_login_claim(const Message& m);
    Message handle_login_response(const Message& m);
    Message handle_transfer(const Message& m);

    bilinear::Params p_;
    registry::Registry& reg_;
    registry::EndorsementCache cache_;
    RandomSource& rng_;
    std::map<Bytes, Slot> slots_;
    std::map<SessionId, LoginSession> logins_;
    std::set<Bytes> spent_challenges_;
    mutable std::mutex mu_;
};

// ---------------------------------------------------------------------------
// Delegation target: answers the original manipulator's claim, challenges,
// verifies the capture, rewrites the description under its own key, and
// pushes the transfer to the server.
class ProxyParty : public Handler {
  public:
    ProxyParty(const bilinear::Params& p, registry::Registry& reg, UserCreds creds,
               Endpoint& to_server, RandomSource& rng);

    Message handle(const Message& m) override;

    // Evidence kept from a completed delegation: the updated avatar, the
    // original manipulator's capture presentation, and the session log.
    struct DelegationRecord {
        identity::Avatar avatar;
        identity::PID pid;
        ProtocolTranscript transcript;
    };
    std::optional<DelegationRecord> record_for(BytesView aid) const;

  private:
    struct DelegSession {
        Step expect = Step::kDelegateResponse;
        identity::Avatar claimed;
        identity::MIT mit_u;
        Bytes challenge;
        std::vector<Message> log;
    };

    bilinear::Params p_;
    registry::Registry& reg_;
    registry::EndorsementCache cache_;
    UserCreds creds_;
    Endpoint& server_;
    RandomSource& rng_;
    std::map<SessionId, DelegSession> sessions_;
    std::set<Bytes> spent_challenges_;
    std::map<Bytes, DelegationRecord> records_;
    mutable std::mutex mu_;
};

// ---------------------------------------------------------------------------
// Avatar-to-avatar verifier: authenticates a claimed avatar (either driver
// type), then runs the contributory key exchange and retains the session as
// evidence for later tracing.
class VerifierParty : public Handler {
  public:
    VerifierParty(const bilinear::Params& p, registry::Registry& reg,
                  UserCreds creds, RandomSource& rng);

    Message handle(const Message& m) override;

    struct RetainedSession {
        SessionId sid{};
        identity::Avatar avatar;
        ProtocolTranscript transcript;
        bilinear::GroupElement key;
        bilinear::FieldScalar w2;  // for exponent audits on the toy backend
    };
    const std::vector<RetainedSession>& retained() const { return retained_; }

  private:
    struct MutualSession {
        Step expect = Step::kMutualResponse;
        identity::Avatar avatar;
        identity::MIT mit_u;  // original manipulator's record
        identity::MIT mit_d;  // driver's record (== mit_u for human-driven)
        Bytes challenge;
        bilinear::FieldScalar w2;
        std::vector<Message> log;
    };

    Message finish_abort(const SessionId& sid, AbortCode code);

    bilinear::Params p_;
    registry::Registry& reg_;
    registry::EndorsementCache cache_;
    UserCreds creds_;
    RandomSource& rng_;
    std::map<SessionId, MutualSession> sessions_;
    std::set<Bytes> spent_challenges_;
    std::vector<RetainedSession> retained_;
    mutable std::mutex mu_;
};

// ---------------------------------------------------------------------------
// Client runners. Each drives one session against an endpoint and throws
// ProtocolAbort on any failure, local or remote.

struct LoginResult {
    identity::Avatar avatar;
    Bytes token;
    ProtocolTranscript transcript;
};

// Four phases: claim (self-delegated signature over the description M),
// challenge, capture response, accept.
LoginResult run_login(const bilinear::Params& p, const UserCreds& user,
                      BytesView aid, BytesView M, Endpoint& server,
                      const ClientOptions& opts, RandomSource& rng);

struct DelegateResult {
    identity::Avatar avatar;  // now AI-driven
    ProtocolTranscript transcript;
};

// Original manipulator's side of delegation: hands the avatar over to the
// proxy behind the endpoint. Needs registry access to fetch and check the
// proxy's identity record before signing toward its key.
DelegateResult run_delegate(const bilinear::Params& p, registry::Registry& reg,
                            const UserCreds& user, const identity::Avatar& current,
                            Endpoint& proxy, const ClientOptions& opts,
                            RandomSource& rng);

// What the prover needs to answer for an avatar: the record itself, the
// driver's key pair, and either a template (human, fresh capture) or the
// stored delegation-time presentation (AI proxy).
struct ProverContext {
    identity::Avatar avatar;
    scheme::KeyPair driver_kp;
    std::optional<biometric::IrisTemplate> tpl;
    std::optional<identity::PID> stored_pid;
};

struct MutualResult {
    bilinear::GroupElement key;
    bilinear::FieldScalar w1;  // for exponent audits on the toy backend
    ProtocolTranscript transcript;
};

// Authenticate as avatar toward a peer verifier, then derive the shared key.
MutualResult run_mutual(const bilinear::Params& p, registry::Registry& reg,
                        const ProverContext& prover, Endpoint& verifier,
                        const ClientOptions& opts, RandomSource& rng);

// ---------------------------------------------------------------------------
// Tracing: from retained evidence back to the registered identity.

struct TraceEvidence {
    identity::Avatar avatar;
    ProtocolTranscript transcript;
    Digest interaction_digest{};  // reporter-supplied digest of the recording
};

Bytes encode_trace_evidence(const bilinear::Params& p, const TraceEvidence& ev);
TraceEvidence decode_trace_evidence(const bilinear::Params& p, BytesView b);

struct TraceRejected : std::runtime_error {
    explicit TraceRejected(AbortCode r)
        : std::runtime_error(std::string("accusation rejected: ") + abort_name(r)),
          reason(r) {}
    AbortCode reason;
};

struct TraceReport {
    identity::UserId manipulator;  // the original manipulator, never the proxy
    identity::DriverType driver = identity::DriverType::kHuman;
    size_t mit_fetches = 0;
    std::vector<std::pair<std::string, bool>> checks;
};

class Tracer {
  public:
    Tracer(const bilinear::Params& p, registry::Registry& reg,
           std::string authority_token);

    // Re-fetches the records (one for human-, two for AI-driven), re-verifies
    // the virtual then the physical identity from the evidence, and only on
    // success resolves the original manipulator. Throws TraceRejected,
    // registry::UnknownSn or registry::Unauthorized.
    TraceReport trace(const TraceEvidence& ev);

  private:
    bilinear::Params p_;
    registry::Registry& reg_;
    std::string token_;
    registry::EndorsementCache cache_;
};

// ---------------------------------------------------------------------------
// Deterministic re-verification of a stored transcript: every decision a
// verifier made from public data, recomputed. (Cross-session nonce-table
// freshness is live server state and deliberately out of replay's scope.)
struct ReplayDecision {
    std::string check;
    bool pass;
};
std::vector<ReplayDecision> replay_transcript(const bilinear::Params& p,
                                              registry::Registry& reg,
                                              registry::EndorsementCache& cache,
                                              const ProtocolTranscript& t);

}  // namespace cps::protocol
