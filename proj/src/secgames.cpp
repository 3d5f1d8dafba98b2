#include "cps/secgames.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace cps::secgames {

using bilinear::Group;

namespace {

Bytes owned(BytesView b) { return Bytes(b.begin(), b.end()); }

}  // namespace

// ---------------------------------------------------------------------------
// Instance

Instance make_instance(const Params& p, const FieldScalar& a,
                       const FieldScalar& b) {
    Instance in;
    in.g = p.generator(Group::kG);
    in.ghat = p.generator(Group::kGhat);
    in.ga = p.pow(in.g, a);
    in.gb = p.pow(in.g, b);
    in.ghat_a = p.pow(in.ghat, a);
    in.ghat_b = p.pow(in.ghat, b);
    in.a = a;
    in.b = b;
    return in;
}

Instance random_instance(const Params& p, RandomSource& rng) {
    return make_instance(p, p.random_nonzero_scalar(rng),
                         p.random_nonzero_scalar(rng));
}

// ---------------------------------------------------------------------------
// Tables

size_t OracleTables::hash_index(BytesView msg) const {
    for (size_t i = 0; i < h_order.size(); ++i) {
        const Bytes& m = h_order[i];
        if (m.size() == msg.size() && std::equal(m.begin(), m.end(), msg.begin()))
            return i + 1;
    }
    return 0;
}

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::kSolved: return "solved";
        case Outcome::kNoForgery: return "no-forgery";
        case Outcome::kForgeryRejected: return "forgery-rejected";
        case Outcome::kWrongGuess: return "wrong-guess";
        case Outcome::kAborted: return "aborted";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Consistency checks

bool pver_under_oracle(const Params& p, const scheme::PublicKey& pk_a,
                       const GroupElement& sigma, const GroupElement& h,
                       const GroupElement& m, const GroupElement& R,
                       const scheme::PublicKey& pk_b) {
    if (p.is_identity(h)) return false;
    if (!p.pair_eq(sigma, p.generator(Group::kGhat), h, pk_a.y2)) return false;
    return p.pair_eq(p.div(h, m), p.generator(Group::kGhat), R, pk_b.y2);
}

SweepResult verify_os_answers(const Params& p, const scheme::PublicKey& pk_a,
                              const scheme::PublicKey& pk_b,
                              const OracleTables& tables) {
    SweepResult s;
    for (const auto& [msg, entries] : tables.l_os) {
        const GroupElement& m = tables.l_h.at(msg).m;
        for (const OsEntry& e : entries) {
            ++s.checked;
            if (pver_under_oracle(p, pk_a, e.sigma, e.h, m, e.R, pk_b)) ++s.passed;
        }
    }
    return s;
}

SweepResult verify_ps_answers(const Params& p, const PsInit& init,
                              const OracleTables& tables) {
    SweepResult s;
    for (const auto& [msg, R] : tables.l_ps) {
        const GroupElement& m = tables.l_h.at(msg).m;
        ++s.checked;
        if (pver_under_oracle(p, init.pk_a, init.sigma_a, init.h_b, m, R,
                              init.pk_b))
            ++s.passed;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Product game (oracle answers follow the delegator-side simulator)

struct OsGameView::State {
    const Params& p;
    const Instance& inst;
    RandomSource& rng;
    size_t q_h;
    scheme::PublicKey pk_a{}, pk_b{};
    Bytes key_b{};  // serialized pk_b.y1: second half of the chameleon-list key
    OracleTables t{};
    size_t h_count = 0;  // adversary-attributed programmings (budgeted)
    size_t ch_count = 0;
    size_t sign_count = 0;
    bool forgery_phase = false;  // verification hash queries are budget-exempt

    // Programs H(msg) on first sight: g^t_i in general, g^b * g^t_j at the
    // guessed index. Draws are nonzero, mirroring the scheme's, so programmed
    // values stay off the identity.
    GroupElement ensure_h(BytesView msg) {
        Bytes key = owned(msg);
        auto it = t.l_h.find(key);
        if (it != t.l_h.end()) return it->second.m;
        if (!forgery_phase && h_count >= q_h)
            throw std::logic_error("hash-oracle budget exceeded");
        FieldScalar ti = p.random_nonzero_scalar(rng);
        size_t idx = t.h_order.size() + 1;
        GroupElement mi = idx == t.j ? p.mul(inst.gb, p.pow(inst.g, ti))
                                     : p.pow(inst.g, ti);
        t.l_h.emplace(key, HashEntry{ti, mi});
        t.h_order.push_back(std::move(key));
        if (!forgery_phase) ++h_count;
        return mi;
    }

    std::pair<GroupElement, GroupElement> add_ch(BytesView msg,
                                                 const GroupElement& mi) {
        if (ch_count >= q_h)
            throw std::logic_error("chameleon-oracle budget exceeded");
        FieldScalar r = p.random_nonzero_scalar(rng);
        GroupElement h = p.mul(mi, p.pow(pk_b.y1, r));
        GroupElement R = p.pow(inst.g, r);
        ++ch_count;
        t.l_ch[{owned(msg), key_b}].push_back(ChEntry{r, h, R, ch_count});
        return {h, R};
    }
};

const Params& OsGameView::params() const { return st_->p; }
const scheme::PublicKey& OsGameView::pk_a() const { return st_->pk_a; }
const scheme::PublicKey& OsGameView::pk_b() const { return st_->pk_b; }

GroupElement OsGameView::query_h(BytesView msg) { return st_->ensure_h(msg); }

std::pair<GroupElement, GroupElement> OsGameView::query_ch(BytesView msg) {
    return st_->add_ch(msg, st_->ensure_h(msg));
}

std::tuple<GroupElement, GroupElement, GroupElement> OsGameView::query_os(
    BytesView msg) {
    State& st = *st_;
    if (st.sign_count >= st.q_h)
        throw std::logic_error("signing-oracle budget exceeded");
    ++st.sign_count;
    GroupElement mi = st.ensure_h(msg);
    size_t idx = st.t.hash_index(msg);
    if (idx == st.t.j) throw GameAbort(idx);

    // Reuse one of the message's chameleon tuples, never the w-th answer;
    // when only that one exists, a fresh tuple is sampled in its place.
    auto key = std::make_pair(owned(msg), st.key_b);
    auto candidates = [&] {
        std::vector<size_t> c;
        const auto& v = st.t.l_ch[key];
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i].index != st.t.w) c.push_back(i);
        return c;
    };
    std::vector<size_t> cand = candidates();
    while (cand.empty()) {
        st.add_ch(msg, mi);
        cand = candidates();
    }
    ChEntry e = st.t.l_ch[key][cand[st.rng.u64() % cand.size()]];

    const FieldScalar& ti = st.t.l_h.at(key.first).t;
    GroupElement sigma = st.p.mul(st.p.pow(st.inst.ga, ti),
                                  st.p.pow(st.inst.ga, st.p.s_mul(st.t.chi, e.r)));
    st.t.l_os[key.first].push_back(OsEntry{sigma, e.h, e.R});
    return {sigma, e.h, e.R};
}

namespace {

void draw_guesses(OracleTables& t, const GameConfig& cfg, RandomSource& rng,
                  bool want_w) {
    if (cfg.guess) {
        auto [j, w] = *cfg.guess;
        if (j < 1 || j > cfg.q_h || (want_w && (w < 1 || w > cfg.q_h)))
            throw std::invalid_argument("forced index guess outside [1, q_h]");
        t.j = j;
        t.w = want_w ? w : 0;
        return;
    }
    t.j = 1 + rng.u64() % cfg.q_h;
    t.w = want_w ? 1 + rng.u64() % cfg.q_h : 0;
}

void require_game_params(const Params& p, const GameConfig& cfg) {
    if (!p.is_transparent())
        throw std::invalid_argument(
            "security-game simulation needs the transparent backend");
    if (cfg.q_h == 0) throw std::invalid_argument("q_h must be positive");
}

template <typename State>
void finish(GameResult& res, State& st) {
    res.h_queries = st.h_count;
    res.ch_queries = st.ch_count;
    res.sign_queries = st.sign_count;
    res.tables = std::move(st.t);
}

}  // namespace

GameResult run_os_euf_simulation(const Params& p, const Instance& inst,
                                 OsAdversary& adv, RandomSource& rng,
                                 const GameConfig& cfg) {
    require_game_params(p, cfg);
    OsGameView::State st{p, inst, rng, cfg.q_h};
    st.t.chi = p.random_nonzero_scalar(rng);
    st.pk_a = scheme::PublicKey{inst.ga, inst.ghat_a};
    st.pk_b = scheme::PublicKey{p.pow(inst.g, st.t.chi),
                                p.pow(inst.ghat, st.t.chi)};
    st.key_b = p.serialize(st.pk_b.y1);
    draw_guesses(st.t, cfg, rng, /*want_w=*/true);

    GameResult res;
    res.pk_a = st.pk_a;
    res.pk_b = st.pk_b;

    OsGameView view(st);
    std::optional<OsForgery> forged;
    try {
        forged = adv.run(view, rng);
    } catch (const GameAbort& ga) {
        res.outcome = Outcome::kAborted;
        res.detail = ga.what();
        finish(res, st);
        return res;
    }

    auto reject = [&](Outcome o, std::string why) {
        res.outcome = o;
        res.detail = std::move(why);
        finish(res, st);
        return res;
    };
    if (!forged) return reject(Outcome::kNoForgery, "adversary conceded without a forgery");

    st.forgery_phase = true;
    GroupElement mstar = st.ensure_h(forged->M);
    if (!pver_under_oracle(p, st.pk_a, forged->sigma, forged->h, mstar,
                           forged->R, st.pk_b))
        return reject(Outcome::kForgeryRejected, "forged tuple fails verification");

    if (auto it = st.t.l_os.find(forged->M); it != st.t.l_os.end())
        for (const OsEntry& e : it->second)
            if (p.eq(e.sigma, forged->sigma) && p.eq(e.h, forged->h) &&
                p.eq(e.R, forged->R))
                return reject(Outcome::kForgeryRejected,
                              "tuple is a signing-oracle answer, not a forgery");

    size_t idx = st.t.hash_index(forged->M);
    if (idx != st.t.j)
        return reject(Outcome::kWrongGuess,
                      "forged message sits at hash index " + std::to_string(idx) +
                          ", guessed " + std::to_string(st.t.j));

    // The w-th chameleon answer must be the forged tuple's.
    const ChEntry* ew = nullptr;
    const Bytes* ew_msg = nullptr;
    for (const auto& [key, entries] : st.t.l_ch)
        for (const ChEntry& e : entries)
            if (e.index == st.t.w) {
                ew = &e;
                ew_msg = &key.first;
            }
    if (!ew)
        return reject(Outcome::kWrongGuess, "no chameleon answer carries index " +
                                                std::to_string(st.t.w));
    if (*ew_msg != forged->M)
        return reject(Outcome::kWrongGuess,
                      "the guessed chameleon answer belongs to a different message");
    if (!p.eq(ew->R, forged->R))
        return reject(Outcome::kWrongGuess,
                      "forged check parameter is not the guessed chameleon answer");

    const FieldScalar& tj = st.t.l_h.at(forged->M).t;
    GroupElement denom = p.mul(p.pow(inst.ga, tj),
                               p.pow(inst.ga, p.s_mul(st.t.chi, ew->r)));
    res.solution = p.div(forged->sigma, denom);
    res.outcome = Outcome::kSolved;
    res.detail = "solution extracted from the forged tuple";
    finish(res, st);
    return res;
}

// ---------------------------------------------------------------------------
// Quotient game (oracle answers follow the delegatee-side simulator)

struct PsGameView::State {
    const Params& p;
    const Instance& inst;
    RandomSource& rng;
    size_t q_h;
    PsInit init{};
    OracleTables t{};
    size_t h_count = 0;
    size_t ch_count = 0;    // unused by this game; kept for uniform reporting
    size_t sign_count = 0;  // collision-oracle calls
    bool forgery_phase = false;

    // Programs H(msg) on first sight: g^theta * y_b^t_i / y_b^theta in
    // general, with an extra g^a divisor at the guessed index.
    GroupElement ensure_h(BytesView msg) {
        Bytes key = owned(msg);
        auto it = t.l_h.find(key);
        if (it != t.l_h.end()) return it->second.m;
        if (!forgery_phase && h_count >= q_h)
            throw std::logic_error("hash-oracle budget exceeded");
        FieldScalar ti = p.random_nonzero_scalar(rng);
        size_t idx = t.h_order.size() + 1;
        GroupElement num = p.mul(init.h_b, p.pow(inst.gb, ti));
        GroupElement den = p.pow(inst.gb, t.theta);
        if (idx == t.j) den = p.mul(inst.ga, den);
        GroupElement mi = p.div(num, den);
        t.l_h.emplace(key, HashEntry{ti, mi});
        t.h_order.push_back(std::move(key));
        if (!forgery_phase) ++h_count;
        return mi;
    }
};

const Params& PsGameView::params() const { return st_->p; }
const PsInit& PsGameView::init() const { return st_->init; }

GroupElement PsGameView::query_h(BytesView msg) { return st_->ensure_h(msg); }

GroupElement PsGameView::query_ps(BytesView msg) {
    State& st = *st_;
    if (st.sign_count >= st.q_h)
        throw std::logic_error("collision-oracle budget exceeded");
    ++st.sign_count;
    Bytes key = owned(msg);
    if (auto it = st.t.l_ps.find(key); it != st.t.l_ps.end()) return it->second;
    st.ensure_h(msg);
    size_t idx = st.t.hash_index(msg);
    if (idx == st.t.j) throw GameAbort(idx);
    const FieldScalar& ti = st.t.l_h.at(key).t;
    GroupElement Ri = st.p.div(st.init.h_b, st.p.pow(st.inst.g, ti));
    st.t.l_ps.emplace(std::move(key), Ri);
    return Ri;
}

GameResult run_ps_euf_simulation(const Params& p, const Instance& inst,
                                 PsAdversary& adv, RandomSource& rng,
                                 const GameConfig& cfg) {
    require_game_params(p, cfg);
    PsGameView::State st{p, inst, rng, cfg.q_h};
    st.t.chi = p.random_nonzero_scalar(rng);
    st.t.theta = p.random_nonzero_scalar(rng);
    FieldScalar tseed = p.random_scalar(rng);
    // theta == t would put the published check parameter at the identity.
    while (p.s_eq(tseed, st.t.theta)) tseed = p.random_scalar(rng);

    st.init.pk_a = scheme::PublicKey{p.pow(inst.g, st.t.chi),
                                     p.pow(inst.ghat, st.t.chi)};
    st.init.pk_b = scheme::PublicKey{inst.gb, inst.ghat_b};
    st.init.h_b = p.pow(inst.g, st.t.theta);
    st.init.sigma_a = p.pow(st.init.h_b, st.t.chi);
    st.init.M = to_bytes("published-delegation");
    st.init.R = p.div(st.init.h_b, p.pow(inst.g, tseed));
    // Published hash entry and collision: hash index 1 belongs to the
    // initialization material, so adversary messages start at index 2.
    GroupElement m0 = p.div(p.mul(st.init.h_b, p.pow(inst.gb, tseed)),
                            p.pow(inst.gb, st.t.theta));
    st.t.l_h.emplace(st.init.M, HashEntry{tseed, m0});
    st.t.h_order.push_back(st.init.M);
    st.t.l_ps.emplace(st.init.M, st.init.R);
    draw_guesses(st.t, cfg, rng, /*want_w=*/false);

    GameResult res;
    res.pk_a = st.init.pk_a;
    res.pk_b = st.init.pk_b;
    res.ps_init = st.init;

    PsGameView view(st);
    std::optional<PsForgery> forged;
    try {
        forged = adv.run(view, rng);
    } catch (const GameAbort& ga) {
        res.outcome = Outcome::kAborted;
        res.detail = ga.what();
        finish(res, st);
        return res;
    }

    auto reject = [&](Outcome o, std::string why) {
        res.outcome = o;
        res.detail = std::move(why);
        finish(res, st);
        return res;
    };
    if (!forged) return reject(Outcome::kNoForgery, "adversary conceded without a forgery");

    st.forgery_phase = true;
    GroupElement mstar = st.ensure_h(forged->M);
    if (!pver_under_oracle(p, st.init.pk_a, st.init.sigma_a, st.init.h_b, mstar,
                           forged->R, st.init.pk_b))
        return reject(Outcome::kForgeryRejected, "forged pair fails verification");

    if (auto it = st.t.l_ps.find(forged->M);
        it != st.t.l_ps.end() && p.eq(it->second, forged->R))
        return reject(Outcome::kForgeryRejected,
                      "the pair is a collision-oracle answer, not a forgery");

    size_t idx = st.t.hash_index(forged->M);
    if (idx != st.t.j)
        return reject(Outcome::kWrongGuess,
                      "forged message sits at hash index " + std::to_string(idx) +
                          ", guessed " + std::to_string(st.t.j));

    const FieldScalar& tj = st.t.l_h.at(forged->M).t;
    res.solution = p.div(p.mul(forged->R, p.pow(inst.g, tj)), st.init.h_b);
    res.outcome = Outcome::kSolved;
    res.detail = "solution extracted from the forged pair";
    finish(res, st);
    return res;
}

// ---------------------------------------------------------------------------
// Built-in strategies

HonestOsAdversary::HonestOsAdversary(size_t messages, size_t ch_per_message,
                                     size_t os_per_message)
    : messages_(messages), ch_(ch_per_message), os_(os_per_message) {}

std::optional<OsForgery> HonestOsAdversary::run(OsGameView& view,
                                                RandomSource& rng) {
    (void)rng;
    for (size_t i = 1; i <= messages_; ++i) {
        Bytes msg = to_bytes("honest-message-" + std::to_string(i));
        view.query_h(msg);
        for (size_t k = 0; k < ch_; ++k) view.query_ch(msg);
        for (size_t k = 0; k < os_; ++k) view.query_os(msg);
    }
    return std::nullopt;
}

HonestPsAdversary::HonestPsAdversary(size_t messages) : messages_(messages) {}

std::optional<PsForgery> HonestPsAdversary::run(PsGameView& view,
                                                RandomSource& rng) {
    (void)rng;
    for (size_t i = 1; i <= messages_; ++i) {
        Bytes msg = to_bytes("honest-message-" + std::to_string(i));
        view.query_h(msg);
        view.query_ps(msg);
    }
    view.query_ps(view.init().M);  // listed answer: replayed, never aborts
    return std::nullopt;
}

std::optional<PsForgery> ReplayPsAdversary::run(PsGameView& view,
                                                RandomSource& rng) {
    (void)rng;
    Bytes msg = to_bytes("replayed-message");
    view.query_h(msg);
    return PsForgery{msg, view.query_ps(msg)};
}

CheatingOsAdversary::CheatingOsAdversary(FieldScalar a, size_t j, size_t w)
    : a_(std::move(a)), j_(j), w_(w) {
    if (j < 1 || w < 1)
        throw std::invalid_argument("target indices are 1-based");
}

std::optional<OsForgery> CheatingOsAdversary::run(OsGameView& view,
                                                  RandomSource& rng) {
    (void)rng;
    const Params& p = view.params();
    Bytes first, target;
    for (size_t i = 1; i <= j_; ++i) {
        Bytes msg = to_bytes("cheat-target-" + std::to_string(i));
        view.query_h(msg);
        if (i == 1) first = msg;
        if (i == j_) target = msg;
    }
    for (size_t k = 1; k < w_; ++k) view.query_ch(first);  // burn indices < w
    auto [h, R] = view.query_ch(target);                   // the w-th answer
    return OsForgery{target, p.pow(h, a_), h, R};
}

CheatingPsAdversary::CheatingPsAdversary(FieldScalar b, size_t j)
    : b_(std::move(b)), j_(j) {
    if (j < 2)
        throw std::invalid_argument(
            "target index must lie past the published entry (j >= 2)");
}

std::optional<PsForgery> CheatingPsAdversary::run(PsGameView& view,
                                                  RandomSource& rng) {
    (void)rng;
    const Params& p = view.params();
    Bytes target;
    GroupElement mt;
    for (size_t i = 2; i <= j_; ++i) {
        Bytes msg = to_bytes("cheat-target-" + std::to_string(i));
        GroupElement m = view.query_h(msg);
        if (i == j_) {
            target = msg;
            mt = m;
        }
    }
    GroupElement Rstar = p.pow(p.div(view.init().h_b, mt), p.s_inv(b_));
    return PsForgery{target, Rstar};
}

// ---------------------------------------------------------------------------
// False-accusation cases

AccusationTarget make_accusation_target(const Params& p,
                                        registry::Registry& reg,
                                        RandomSource& rng) {
    AccusationTarget t;

    biometric::IrisTemplate tpl = biometric::enroll(7001);
    scheme::KeyPair kp = scheme::keygen(p, rng);
    auto user = reg.register_user({to_bytes("framed-user"), {}}, kp.pk, tpl,
                                  to_bytes("honest record"), rng);
    t.user_id = user.id;
    t.user_sn = user.mit.sn;
    t.user_pk = user.mit.pk;

    t.proxy_kp = scheme::keygen(p, rng);
    auto proxy = reg.register_user({to_bytes("colluding-proxy"), {}},
                                   t.proxy_kp.pk, biometric::enroll(7002),
                                   to_bytes("proxy record"), rng);
    t.proxy_sn = proxy.mit.sn;

    // A real login produces the avatar record and session log the reporter
    // later holds.
    protocol::Server server(p, reg, rng);
    Bytes aid = to_bytes("framed-avatar");
    server.register_slot(t.user_sn, aid);
    protocol::LoopbackEndpoint ep(server);
    protocol::UserCreds creds{user.id, kp, t.user_sn, tpl};
    protocol::LoginResult lr = protocol::run_login(
        p, creds, aid, to_bytes("honest appearance"), ep, {0.02, 0}, rng);
    t.avatar = lr.avatar;
    t.transcript = lr.transcript;

    // The capture bytes travel in the response; an observer sees them.
    protocol::PidBody pid =
        protocol::decode_pid_body(p, lr.transcript.messages.at(2).body);
    t.observed_feature = protocol::split_m_prime(pid.M_prime).first;
    return t;
}

namespace {

AccusationResult vacuous_result() {
    AccusationResult res;
    res.vacuous = true;
    res.warning =
        "0 attempts: rejection rate is vacuously 1.0; no forgery was exercised";
    return res;
}

void run_accusations(const Params& p, registry::Registry& reg,
                     const std::string& token, size_t attempts,
                     AccusationResult& res,
                     const std::function<protocol::TraceEvidence()>& forge) {
    protocol::Tracer tracer(p, reg, token);
    res.attempts = attempts;
    for (size_t i = 0; i < attempts; ++i) {
        protocol::TraceEvidence ev = forge();
        try {
            tracer.trace(ev);
        } catch (const protocol::TraceRejected& rej) {
            ++res.rejected;
            ++res.reject_reasons[protocol::abort_name(rej.reason)];
        }
    }
}

}  // namespace

AccusationResult false_accusation_case1(const Params& p,
                                        registry::Registry& reg,
                                        const std::string& authority_token,
                                        const AccusationTarget& target,
                                        size_t attempts, RandomSource& rng) {
    if (attempts == 0) return vacuous_result();
    AccusationResult res;
    Digest digest = protocol::transcript_digest(target.transcript.messages,
                                                target.transcript.messages.size());
    run_accusations(p, reg, authority_token, attempts, res, [&] {
        // Honest endorsement (sigma, h), forged description, guessed check
        // parameter: the description-binding equation cannot be satisfied.
        identity::Avatar forged = target.avatar;
        Bytes m_star = rng.bytes(48);
        GroupElement r_star = p.pow(p.generator(Group::kG), p.random_scalar(rng));
        forged.vid = identity::VID{std::move(m_star), std::move(r_star)};
        return protocol::TraceEvidence{std::move(forged), target.transcript,
                                       digest};
    });
    return res;
}

AccusationResult false_accusation_case2(const Params& p,
                                        registry::Registry& reg,
                                        const std::string& authority_token,
                                        const AccusationTarget& target,
                                        size_t attempts, RandomSource& rng) {
    if (attempts == 0) return vacuous_result();
    AccusationResult res;
    run_accusations(p, reg, authority_token, attempts, res, [&] {
        // The colluding proxy binds a forged description and a reused capture
        // under its own key; only the delegator's endorsement component is
        // unforgeable, so it is guessed at random.
        Bytes m_p = rng.bytes(48);
        scheme::ChameleonHash ch =
            scheme::chameleon_hash(p, m_p, target.proxy_kp.pk, rng);
        GroupElement sigma_star =
            p.pow(p.generator(Group::kG), p.random_scalar(rng));

        identity::Avatar forged;
        forged.sn_u = target.user_sn;
        forged.aid = to_bytes("accused-avatar");
        forged.sn_p = target.proxy_sn;
        forged.sigma = sigma_star;
        forged.h = ch.h;
        forged.vid = identity::VID{m_p, ch.R};

        Bytes challenge = rng.bytes(protocol::kChallengeBytes);
        Bytes m_prime = target.observed_feature;
        m_prime.insert(m_prime.end(), challenge.begin(), challenge.end());
        GroupElement r_prime = scheme::psig(p, target.proxy_kp.sk, ch.h, m_prime);
        forged.pid = identity::PID{m_prime, r_prime};

        // Fabricated session log carrying the capture presentation.
        protocol::SessionId sid{};
        rng.fill(sid);
        protocol::ProtocolTranscript tr;
        tr.add({sid, protocol::Step::kMutualClaim,
                protocol::encode_body(protocol::DelegateClaimBody{
                    identity::encode_avatar(p, forged)})});
        tr.add({sid, protocol::Step::kMutualChallenge,
                protocol::encode_body(protocol::KeyedChallengeBody{{}, challenge})});
        tr.add({sid, protocol::Step::kMutualResponse,
                protocol::encode_body(p, protocol::PidBody{m_prime, r_prime})});
        tr.terminal_status = protocol::ProtocolTranscript::kAccepted;
        Digest digest =
            protocol::transcript_digest(tr.messages, tr.messages.size());
        return protocol::TraceEvidence{std::move(forged), std::move(tr), digest};
    });
    return res;
}

}  // namespace cps::secgames
