#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cps/parties.hpp"

// Executable forms of the scheme's two unforgeability-game simulators, plus
// the two false-accusation attack cases run through the real tracer. These
// are consistency and negative-test harnesses: they demonstrate that the
// simulators answer oracles indistinguishably from honest signers and that
// the extraction arithmetic is exact, not that any problem is hard.
//
// Both game runners work in the random-oracle model: the message hash is a
// programmed table, so verification of simulator output goes through
// pver_under_oracle (the scheme's verification equations with the table
// lookup in place of the hash). The games require the transparent backend,
// where the harness knows every exponent and can check extraction results;
// the false-accusation cases use the real hash and run on either backend.
namespace cps::secgames {

using bilinear::FieldScalar;
using bilinear::GroupElement;
using bilinear::Params;

// ---------------------------------------------------------------------------
// Problem instance

// A product/quotient instance (g, g^a, g^b) together with the paired-group
// halves ghat^a, ghat^b that the verification equations consume (the "co-"
// form the asymmetric setting needs). The exponents ride along for harness
// checks only: game code answers oracles from the group elements alone, and
// adversary strategies never see the struct.
struct Instance {
    GroupElement g, ga, gb;
    GroupElement ghat, ghat_a, ghat_b;
    FieldScalar a, b;
};

Instance make_instance(const Params& p, const FieldScalar& a,
                       const FieldScalar& b);
Instance random_instance(const Params& p, RandomSource& rng);

// ---------------------------------------------------------------------------
// Oracle tables

struct HashEntry {
    FieldScalar t;
    GroupElement m;  // the programmed hash value for this message
};

struct ChEntry {
    FieldScalar r;
    GroupElement h, R;
    size_t index = 0;  // global chameleon-query counter at creation (1-based)
};

struct OsEntry {
    GroupElement sigma, h, R;
};

// One game run's append-only bookkeeping. Hash indices are positions in
// h_order (1-based, distinct messages in first-programmed order); repeat
// queries are lookups and claim no new index.
struct OracleTables {
    std::map<Bytes, HashEntry> l_h;
    std::vector<Bytes> h_order;
    std::map<std::pair<Bytes, Bytes>, std::vector<ChEntry>> l_ch;  // (msg, key)
    std::map<Bytes, std::vector<OsEntry>> l_os;
    std::map<Bytes, GroupElement> l_ps;
    size_t j = 0, w = 0;     // forged-index guesses
    FieldScalar chi, theta;  // simulator-held exponents (theta: quotient game)

    // 1-based hash index of msg; 0 when never programmed.
    size_t hash_index(BytesView msg) const;
};

// Thrown by the forbidden oracle query (the guessed index); the runner
// catches it and reports Outcome::kAborted. No table entry is written for
// the aborted answer, so nothing programmed leaks through it.
struct GameAbort : std::runtime_error {
    explicit GameAbort(size_t i)
        : std::runtime_error("simulation aborted: oracle query on guessed index " +
                             std::to_string(i)),
          index(i) {}
    size_t index;
};

// ---------------------------------------------------------------------------
// Game results

enum class Outcome : uint8_t {
    kSolved,           // valid forgery at the guessed indices; solution extracted
    kNoForgery,        // the adversary conceded without output
    kForgeryRejected,  // output failed verification or was an oracle answer
    kWrongGuess,       // valid forgery, but not where the simulator guessed
    kAborted,          // forbidden oracle query ended the game
};

const char* outcome_name(Outcome o);

// The quotient game's published starting material: a complete original
// signature (sigma_a, h_b, M, R) valid under the programmed hash table.
struct PsInit {
    scheme::PublicKey pk_a, pk_b;
    GroupElement sigma_a;  // h_b^chi
    GroupElement h_b;      // g^theta
    Bytes M;
    GroupElement R;        // g^(theta - t)
};

struct GameResult {
    Outcome outcome = Outcome::kNoForgery;
    std::optional<GroupElement> solution;  // g^(a*b) resp. g^(a/b) when solved
    std::string detail;
    scheme::PublicKey pk_a, pk_b;
    std::optional<PsInit> ps_init;  // quotient game only
    OracleTables tables;
    size_t h_queries = 0;     // distinct messages programmed for the adversary
    size_t ch_queries = 0;    // chameleon answers created (internal ones too)
    size_t sign_queries = 0;  // signing/collision oracle calls
};

struct GameConfig {
    // Oracle budget per oracle, and the range the index guesses are drawn
    // from. Exceeding a budget is harness misuse and throws std::logic_error.
    size_t q_h = 64;
    // Forced (j, w) guesses; drawn uniformly from [1, q_h] when absent. The
    // quotient game ignores w.
    std::optional<std::pair<size_t, size_t>> guess;
};

// ---------------------------------------------------------------------------
// Adversary interfaces
//
// A strategy interacts with the oracles through a view and either outputs a
// forgery attempt or concedes. Strategies see public keys and oracle answers,
// never the tables, the guesses, or the instance exponents.

class OsGameView {
  public:
    const Params& params() const;
    const scheme::PublicKey& pk_a() const;
    const scheme::PublicKey& pk_b() const;
    // Hash oracle: programs a fresh entry on first sight of msg.
    GroupElement query_h(BytesView msg);
    // Chameleon oracle: a fresh tuple (h, R) for msg under pk_b.
    std::pair<GroupElement, GroupElement> query_ch(BytesView msg);
    // Signing oracle: (sigma, h, R) reusing one of msg's chameleon tuples
    // (never the w-th). Throws GameAbort when msg is the j-th hash query.
    std::tuple<GroupElement, GroupElement, GroupElement> query_os(BytesView msg);

  private:
    friend GameResult run_os_euf_simulation(const Params&, const Instance&,
                                            class OsAdversary&, RandomSource&,
                                            const GameConfig&);
    struct State;
    explicit OsGameView(State& st) : st_(&st) {}
    State* st_;
};

struct OsForgery {
    Bytes M;
    GroupElement sigma, h, R;
};

class OsAdversary {
  public:
    virtual ~OsAdversary() = default;
    virtual std::optional<OsForgery> run(OsGameView& view, RandomSource& rng) = 0;
};

class PsGameView {
  public:
    const Params& params() const;
    const PsInit& init() const;
    GroupElement query_h(BytesView msg);
    // Collision oracle: R' for msg. Answers already-listed messages from the
    // list; throws GameAbort when a fresh answer would sit at hash index j.
    GroupElement query_ps(BytesView msg);

  private:
    friend GameResult run_ps_euf_simulation(const Params&, const Instance&,
                                            class PsAdversary&, RandomSource&,
                                            const GameConfig&);
    struct State;
    explicit PsGameView(State& st) : st_(&st) {}
    State* st_;
};

struct PsForgery {
    Bytes M;
    GroupElement R;  // claimed collision for the published (sigma_a, h_b)
};

class PsAdversary {
  public:
    virtual ~PsAdversary() = default;
    virtual std::optional<PsForgery> run(PsGameView& view, RandomSource& rng) = 0;
};

// ---------------------------------------------------------------------------
// Built-in honest strategies

// Exercises every oracle legitimately and concedes: `messages` distinct
// messages, with `ch_per_message` chameleon tuples and `os_per_message`
// signing answers each. The game reports kNoForgery.
class HonestOsAdversary : public OsAdversary {
  public:
    HonestOsAdversary(size_t messages, size_t ch_per_message,
                      size_t os_per_message);
    std::optional<OsForgery> run(OsGameView& view, RandomSource& rng) override;

  private:
    size_t messages_, ch_, os_;
};

// Hashes `messages` fresh messages, asks for each one's collision, then
// re-asks for the published message's collision (the listed path). Concedes.
class HonestPsAdversary : public PsAdversary {
  public:
    explicit HonestPsAdversary(size_t messages);
    std::optional<PsForgery> run(PsGameView& view, RandomSource& rng) override;

  private:
    size_t messages_;
};

// Returns an oracle answer as its "forgery"; the game rejects it by list
// membership, never by the verification equations.
class ReplayPsAdversary : public PsAdversary {
  public:
    std::optional<PsForgery> run(PsGameView& view, RandomSource& rng) override;
};

// ---------------------------------------------------------------------------
// Cheating test doubles
//
// Segregated from the honest strategies above: each is handed one secret
// exponent of the instance so the extraction path can be exercised
// deterministically. Nothing outside these doubles receives an exponent.

// Knows the delegator exponent a. Places its target message at hash index j
// and its chameleon tuple at global index w, signs that tuple itself with a,
// and outputs the forgery. Run the game with the same (j, w) forced so the
// simulator's guesses line up.
class CheatingOsAdversary : public OsAdversary {
  public:
    CheatingOsAdversary(FieldScalar a, size_t j, size_t w);
    std::optional<OsForgery> run(OsGameView& view, RandomSource& rng) override;

  private:
    FieldScalar a_;
    size_t j_, w_;
};

// Knows the delegatee exponent b. Places its target at hash index j (j >= 2:
// index 1 is the published message) and computes the collision
// (h_b / m_j)^(1/b) directly, without the collision oracle.
class CheatingPsAdversary : public PsAdversary {
  public:
    CheatingPsAdversary(FieldScalar b, size_t j);
    std::optional<PsForgery> run(PsGameView& view, RandomSource& rng) override;

  private:
    FieldScalar b_;
    size_t j_;
};

// ---------------------------------------------------------------------------
// Game runners (transparent backend only; throw std::invalid_argument on the
// production backend)

// Product game: pk_a = (g^a, ghat^a) from the instance, pk_b fresh with a
// simulator-known exponent. A valid forgery at the guessed indices yields
// g^(a*b).
GameResult run_os_euf_simulation(const Params& p, const Instance& inst,
                                 OsAdversary& adv, RandomSource& rng,
                                 const GameConfig& cfg = {});

// Quotient game: pk_b = (g^b, ghat^b) from the instance, pk_a fresh. The
// simulator publishes PsInit and answers collisions; a valid forgery at the
// guessed index yields g^(a/b).
GameResult run_ps_euf_simulation(const Params& p, const Instance& inst,
                                 PsAdversary& adv, RandomSource& rng,
                                 const GameConfig& cfg = {});

// ---------------------------------------------------------------------------
// Consistency checks

// The scheme's verification equations with `m` standing in for the message
// hash: sigma must pair against pk_a, and (h / m, R) must pair against pk_b.
// Identity h is rejected, exactly like the scheme's verifier.
bool pver_under_oracle(const Params& p, const scheme::PublicKey& pk_a,
                       const GroupElement& sigma, const GroupElement& h,
                       const GroupElement& m, const GroupElement& R,
                       const scheme::PublicKey& pk_b);

struct SweepResult {
    size_t checked = 0;
    size_t passed = 0;
};

// Re-verifies every signing-oracle answer in the tables under the programmed
// hash: pver_under_oracle(pk_a, sigma_i, h_i, m_i, R_i, pk_b) for all of L_OS.
SweepResult verify_os_answers(const Params& p, const scheme::PublicKey& pk_a,
                              const scheme::PublicKey& pk_b,
                              const OracleTables& tables);

// Re-verifies every collision answer in L_PS (the published pair included)
// against the fixed (sigma_a, h_b) of the run's initialization.
SweepResult verify_ps_answers(const Params& p, const PsInit& init,
                              const OracleTables& tables);

// ---------------------------------------------------------------------------
// False-accusation cases
//
// A malicious reporter fabricates trace evidence to frame an honest user and
// submits it to the real tracer. Case 1 targets a human-driven avatar: the
// reporter keeps the honest endorsement (sigma, h) but swaps in a forged
// description with a random check parameter, which fails the description-
// binding equation. Case 2 targets an AI-driven avatar with a colluding
// proxy: the proxy's own key yields well-bound description and capture
// parameters, but the delegator's endorsement component must be guessed, and
// a random guess fails the endorsement equation. Both run on any backend.

// Everything a reporter could legitimately collect about an honest target,
// plus (case 2) the colluding proxy's key material.
struct AccusationTarget {
    identity::UserId user_id;  // whom the reporter tries to frame
    identity::SerialNumber user_sn{};
    scheme::PublicKey user_pk;
    identity::Avatar avatar;                 // real human-driven avatar
    protocol::ProtocolTranscript transcript;  // its accepted login session
    Bytes observed_feature;  // capture bytes lifted from that session
    identity::SerialNumber proxy_sn{};  // colluding proxy (case 2)
    scheme::KeyPair proxy_kp;
};

// Registers an honest user and a proxy, runs a real login, and collects the
// material above from the session the way an observer would.
AccusationTarget make_accusation_target(const Params& p,
                                        registry::Registry& reg,
                                        RandomSource& rng);

struct AccusationResult {
    size_t attempts = 0;
    size_t rejected = 0;
    bool vacuous = false;  // attempts == 0: nothing exercised
    std::string warning;   // set for the vacuous case
    // failing-check code name -> count, e.g. {"bad-signature": N}
    std::map<std::string, size_t> reject_reasons;

    double rejection_rate() const {
        return vacuous ? 1.0 : double(rejected) / double(attempts);
    }
};

AccusationResult false_accusation_case1(const Params& p,
                                        registry::Registry& reg,
                                        const std::string& authority_token,
                                        const AccusationTarget& target,
                                        size_t attempts, RandomSource& rng);

AccusationResult false_accusation_case2(const Params& p,
                                        registry::Registry& reg,
                                        const std::string& authority_token,
                                        const AccusationTarget& target,
                                        size_t attempts, RandomSource& rng);

}  // namespace cps::secgames
