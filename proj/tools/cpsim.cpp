// cpsim: command-line simulator for the chameleon-proxy-signature avatar
// stack. One state directory carries the identity ledger, participant
// credentials, avatar records, transcripts, and retained trace evidence, so
// register / login / delegate / interact / trace compose across invocations.
// Security-game and benchmark harnesses run stateless.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cps/bench.hpp"
#include "cps/parties.hpp"
#include "cps/secgames.hpp"
#include "cps/transport.hpp"

namespace fs = std::filesystem;
using namespace cps;
using bilinear::Params;
using Json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Global options and ambient context.

struct GlobalOpts {
    std::string state_dir = "cpsim-state";
    std::string ledger_path;
    std::string trusted_store_path;
    std::string idp_key_path;
    std::string authority_token = "local-authority";
    std::string transport = "loopback";
    std::string backend;         // "", "production", "transparent"
    uint64_t toy_order = 1009;   // transparent-backend group order
    int64_t seed = -1;           // < 0: system randomness
};

Params make_params(const GlobalOpts& g) {
    std::string b = g.backend;
    if (b.empty()) {
        const char* env = std::getenv("CPS_BACKEND");
        b = env ? env : "production";
    }
    if (b == "production") return Params::production();
    if (b == "transparent") return Params::transparent(g.toy_order);
    throw CLI::ValidationError("backend must be production or transparent, got " + b);
}

// Each invocation gets its own reproducible stream: reusing one raw seed
// across commands would hand every participant the same key material.
std::unique_ptr<RandomSource> make_rng(const GlobalOpts& g,
                                       const std::string& label) {
    if (g.seed < 0) return std::make_unique<SystemRandom>();
    ByteWriter w;
    w.u64(uint64_t(g.seed));
    w.blob(to_bytes(label));
    auto d = sha256(w.take());
    uint64_t s = 0;
    for (int i = 0; i < 8; ++i) s = (s << 8) | d[i];
    return std::make_unique<DeterministicRandom>(s);
}

registry::Config reg_config(const GlobalOpts& g) {
    fs::path sd(g.state_dir);
    fs::create_directories(sd);
    registry::Config cfg;
    cfg.ledger_path =
        g.ledger_path.empty() ? (sd / "ledger.bin").string() : g.ledger_path;
    cfg.trusted_store_path = g.trusted_store_path.empty()
                                 ? (sd / "trusted.bin").string()
                                 : g.trusted_store_path;
    cfg.idp_key_path =
        g.idp_key_path.empty() ? (sd / "idp.key").string() : g.idp_key_path;
    cfg.authority_token = g.authority_token;
    return cfg;
}

fs::path users_dir(const GlobalOpts& g) { return fs::path(g.state_dir) / "users"; }
fs::path avatars_dir(const GlobalOpts& g) { return fs::path(g.state_dir) / "avatars"; }
fs::path transcripts_dir(const GlobalOpts& g) { return fs::path(g.state_dir) / "transcripts"; }
fs::path evidence_dir(const GlobalOpts& g) { return fs::path(g.state_dir) / "evidence"; }
fs::path slots_path(const GlobalOpts& g) { return fs::path(g.state_dir) / "server-slots.bin"; }

// ---------------------------------------------------------------------------
// Small file helpers.

Bytes read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    return Bytes(std::istreambuf_iterator<char>(in),
                 std::istreambuf_iterator<char>());
}

void write_file(const fs::path& p, BytesView b) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out.write(reinterpret_cast<const char*>(b.data()),
              std::streamsize(b.size()));
    if (!out) throw std::runtime_error("short write to " + p.string());
}

std::string printable_or_hex(BytesView b) {
    for (uint8_t c : b)
        if (c < 0x20 || c > 0x7e) return "0x" + hex(b);
    return std::string(b.begin(), b.end());
}

// ---------------------------------------------------------------------------
// Persistent records: participant credentials and avatar state.

Bytes encode_creds(const Params& p, const protocol::UserCreds& c) {
    ByteWriter w;
    w.blob(c.id.rid);
    w.blob(c.id.mid);
    w.fixed(BytesView(c.sn.data(), c.sn.size()));
    w.blob(p.scalar_to_bytes(c.kp.sk));
    w.blob(p.serialize(c.kp.pk.y1));
    w.blob(p.serialize(c.kp.pk.y2));
    w.blob(c.tpl.code);
    w.blob(c.tpl.mask);
    return w.take();
}

protocol::UserCreds decode_creds(const Params& p, BytesView b) {
    ByteReader r(b);
    protocol::UserCreds c;
    c.id.rid = r.blob();
    c.id.mid = r.blob();
    Bytes sn = r.fixed(c.sn.size());
    std::copy(sn.begin(), sn.end(), c.sn.begin());
    c.kp.sk = p.scalar_from_bytes(r.blob());
    c.kp.pk.y1 = p.deserialize(bilinear::Group::kG, r.blob());
    c.kp.pk.y2 = p.deserialize(bilinear::Group::kGhat, r.blob());
    c.tpl.code = r.blob();
    c.tpl.mask = r.blob();
    r.expect_end();
    return c;
}

protocol::UserCreds load_creds(const Params& p, const GlobalOpts& g,
                               const std::string& name) {
    fs::path f = users_dir(g) / (name + ".creds");
    if (!fs::exists(f))
        throw std::runtime_error("no such participant: " + name +
                                 " (run `cpsim register --user " + name + "`)");
    return decode_creds(p, read_file(f));
}

// Current state of one avatar as the simulator sees it: the record itself,
// the live login token (empty once delegated or never logged in), who owns
// and who currently drives it, and the delegation-time capture for AI play.
struct AvatarState {
    identity::Avatar avatar;
    Bytes token;
    std::string owner;
    std::string driver;
    std::optional<identity::PID> stored_pid;
};

Bytes encode_avatar_state(const Params& p, const AvatarState& s) {
    ByteWriter w;
    w.blob(identity::encode_avatar(p, s.avatar));
    w.blob(s.token);
    w.blob(to_bytes(s.owner));
    w.blob(to_bytes(s.driver));
    w.u8(s.stored_pid ? 1 : 0);
    if (s.stored_pid) w.blob(identity::encode_pid(p, *s.stored_pid));
    return w.take();
}

AvatarState decode_avatar_state(const Params& p, BytesView b) {
    ByteReader r(b);
    AvatarState s;
    s.avatar = identity::decode_avatar(p, r.blob());
    s.token = r.blob();
    Bytes owner = r.blob();
    Bytes driver = r.blob();
    s.owner = std::string(owner.begin(), owner.end());
    s.driver = std::string(driver.begin(), driver.end());
    if (r.u8()) s.stored_pid = identity::decode_pid(p, r.blob());
    r.expect_end();
    return s;
}

AvatarState load_avatar_state(const Params& p, const GlobalOpts& g,
                              const std::string& name) {
    fs::path f = avatars_dir(g) / (name + ".av");
    if (!fs::exists(f))
        throw std::runtime_error("no such avatar: " + name +
                                 " (run `cpsim login` first)");
    return decode_avatar_state(p, read_file(f));
}

void save_avatar_state(const Params& p, const GlobalOpts& g,
                       const std::string& name, const AvatarState& s) {
    write_file(avatars_dir(g) / (name + ".av"), encode_avatar_state(p, s));
}

void save_transcript(const GlobalOpts& g, const std::string& stem,
                     const protocol::ProtocolTranscript& t) {
    fs::path f = transcripts_dir(g) / (stem + ".tr");
    write_file(f, protocol::encode_transcript(t));
    std::cout << "transcript: " << f.string() << "\n";
}

// ---------------------------------------------------------------------------
// Transport plumbing: the responder always lives in this process; the frames
// either short-circuit (loopback) or travel a real localhost socket.

struct Pipe {
    std::unique_ptr<protocol::Endpoint> ep;
    std::unique_ptr<protocol::TcpServer> srv;
    std::thread thread;

    Pipe() = default;
    Pipe(Pipe&&) = default;
    ~Pipe() {
        if (srv) {
            srv->stop();
            if (thread.joinable()) thread.join();
        }
    }
};

Pipe make_pipe(const std::string& transport, protocol::Handler& h) {
    Pipe p;
    if (transport == "loopback") {
        p.ep = std::make_unique<protocol::LoopbackEndpoint>(h);
        return p;
    }
    if (transport.rfind("tcp:", 0) == 0) {
        std::string addr = transport.substr(4);
        if (addr.empty()) addr = "127.0.0.1:0";
        p.srv = std::make_unique<protocol::TcpServer>(addr, h);
        protocol::TcpServer* srv = p.srv.get();
        p.thread = std::thread([srv] { srv->run(); });
        std::string host = addr.substr(0, addr.rfind(':'));
        p.ep = protocol::tcp_endpoint(host + ":" + std::to_string(srv->port()));
        return p;
    }
    throw CLI::ValidationError("transport must be loopback or tcp:<host:port>, got " +
                               transport);
}

// ---------------------------------------------------------------------------
// Command implementations.

int cmd_register(const GlobalOpts& g, const std::string& name,
                 const std::string& info, int64_t iris_seed) {
    Params p = make_params(g);
    auto rng = make_rng(g, "register:" + name);
    fs::path f = users_dir(g) / (name + ".creds");
    if (fs::exists(f))
        throw std::runtime_error("participant already registered: " + name);

    registry::Registry reg(p, reg_config(g), *rng);
    uint64_t seed = iris_seed >= 0 ? uint64_t(iris_seed)
                                   : std::hash<std::string>{}(name);
    auto tpl = biometric::enroll(seed);
    auto kp = scheme::keygen(p, *rng);
    identity::UserId id{to_bytes(name), {}};
    auto rr = reg.register_user(id, kp.pk, tpl, to_bytes(info), *rng);

    protocol::UserCreds creds{rr.id, kp, rr.mit.sn, tpl};
    write_file(f, encode_creds(p, creds));
    std::cout << "registered: " << name << "\n";
    std::cout << "sn: " << hex(identity::sn_bytes(rr.mit.sn)) << "\n";
    std::cout << "mid: " << hex(rr.id.mid) << "\n";
    std::cout << "ledger entries: " << reg.entry_count() << "\n";
    return 0;
}

int cmd_login(const GlobalOpts& g, const std::string& user_name,
              const std::string& avatar_name, const std::string& appearance,
              const protocol::ClientOptions& opts) {
    Params p = make_params(g);
    auto rng = make_rng(g, "login:" + user_name + ":" + avatar_name);
    registry::Registry reg(p, reg_config(g), *rng);
    auto user = load_creds(p, g, user_name);

    protocol::Server server(p, reg, *rng);
    if (fs::exists(slots_path(g))) server.load_slots(slots_path(g));
    Bytes aid = to_bytes(avatar_name);
    if (!server.has_slot(aid)) {
        server.register_slot(user.sn, aid);
        std::cout << "provisioned avatar slot: " << avatar_name << "\n";
    }

    Pipe pipe = make_pipe(g.transport, server);
    try {
        auto res = protocol::run_login(p, user, aid, to_bytes(appearance),
                                       *pipe.ep, opts, *rng);
        AvatarState st{res.avatar, res.token, user_name, user_name,
                       std::nullopt};
        save_avatar_state(p, g, avatar_name, st);
        server.save_slots(slots_path(g));
        std::cout << "login accepted\n";
        std::cout << "token: " << hex(res.token) << "\n";
        save_transcript(g, avatar_name + "-login", res.transcript);
        return 0;
    } catch (const protocol::ProtocolAbort& a) {
        server.save_slots(slots_path(g));
        std::cerr << "login aborted: " << protocol::abort_name(a.code) << "\n";
        save_transcript(g, avatar_name + "-login", a.transcript);
        return 1;
    }
}

int cmd_delegate(const GlobalOpts& g, const std::string& user_name,
                 const std::string& proxy_name, const std::string& avatar_name,
                 const protocol::ClientOptions& opts) {
    Params p = make_params(g);
    auto rng = make_rng(g, "delegate:" + user_name + ":" + proxy_name + ":" +
                                avatar_name);
    registry::Registry reg(p, reg_config(g), *rng);
    auto user = load_creds(p, g, user_name);
    auto proxy = load_creds(p, g, proxy_name);
    AvatarState st = load_avatar_state(p, g, avatar_name);
    if (st.driver != st.owner)
        throw std::runtime_error("avatar is already delegated: " + avatar_name);

    protocol::Server server(p, reg, *rng);
    if (fs::exists(slots_path(g))) server.load_slots(slots_path(g));

    // The proxy pushes the transfer to the in-process server directly; the
    // user's leg to the proxy rides the selected transport.
    protocol::LoopbackEndpoint to_server(server);
    protocol::ProxyParty pparty(p, reg, proxy, to_server, *rng);
    Pipe pipe = make_pipe(g.transport, pparty);
    Bytes aid = to_bytes(avatar_name);
    try {
        auto res =
            protocol::run_delegate(p, reg, user, st.avatar, *pipe.ep, opts, *rng);
        auto rec = pparty.record_for(aid);
        if (!rec) throw std::runtime_error("delegation record missing");
        AvatarState updated{rec->avatar, {}, user_name, proxy_name, rec->pid};
        save_avatar_state(p, g, avatar_name, updated);
        server.save_slots(slots_path(g));
        std::cout << "delegation accepted; avatar is now AI-driven by "
                  << proxy_name << "\n";
        std::cout << "login token invalidated (original user forced offline)\n";
        save_transcript(g, avatar_name + "-delegate", res.transcript);
        return 0;
    } catch (const protocol::ProtocolAbort& a) {
        server.save_slots(slots_path(g));
        std::cerr << "delegation aborted: " << protocol::abort_name(a.code)
                  << "\n";
        save_transcript(g, avatar_name + "-delegate", a.transcript);
        return 1;
    }
}

int cmd_interact(const GlobalOpts& g, const std::string& avatar_name,
                 const std::string& verifier_name,
                 const protocol::ClientOptions& opts) {
    Params p = make_params(g);
    auto rng = make_rng(g, "interact:" + avatar_name + ":" + verifier_name);
    registry::Registry reg(p, reg_config(g), *rng);
    AvatarState st = load_avatar_state(p, g, avatar_name);
    auto driver = load_creds(p, g, st.driver);
    auto verifier_creds = load_creds(p, g, verifier_name);

    protocol::VerifierParty verifier(p, reg, verifier_creds, *rng);
    Pipe pipe = make_pipe(g.transport, verifier);

    bool human = st.driver == st.owner;
    protocol::ProverContext prover{
        st.avatar, driver.kp,
        human ? std::optional<biometric::IrisTemplate>(driver.tpl)
              : std::nullopt,
        st.stored_pid};
    try {
        auto res = protocol::run_mutual(p, reg, prover, *pipe.ep, opts, *rng);
        const auto& kept = verifier.retained().back();
        protocol::TraceEvidence ev{
            kept.avatar, kept.transcript,
            protocol::transcript_digest(kept.transcript.messages,
                                        kept.transcript.messages.size())};
        fs::path ef = evidence_dir(g) / (avatar_name + ".ev");
        write_file(ef, protocol::encode_trace_evidence(p, ev));
        Digest kd = sha256(p.serialize(res.key));
        std::cout << "mutual authentication accepted ("
                  << (human ? "human" : "AI") << "-driven prover)\n";
        std::cout << "shared-key digest: " << hex(kd) << "\n";
        std::cout << "evidence: " << ef.string() << "\n";
        save_transcript(g, avatar_name + "-interact", res.transcript);
        return 0;
    } catch (const protocol::ProtocolAbort& a) {
        std::cerr << "interaction aborted: " << protocol::abort_name(a.code)
                  << "\n";
        save_transcript(g, avatar_name + "-interact", a.transcript);
        return 1;
    }
}

int cmd_trace(const GlobalOpts& g, const std::string& avatar_name,
              const std::string& evidence_path) {
    Params p = make_params(g);
    auto rng = make_rng(g, "trace:" + avatar_name + ":" + evidence_path);
    registry::Registry reg(p, reg_config(g), *rng);

    fs::path ef = evidence_path.empty()
                      ? evidence_dir(g) / (avatar_name + ".ev")
                      : fs::path(evidence_path);
    if (!fs::exists(ef))
        throw std::runtime_error("no evidence at " + ef.string() +
                                 " (run `cpsim interact` first)");
    auto ev = protocol::decode_trace_evidence(p, read_file(ef));

    protocol::Tracer tracer(p, reg, g.authority_token);
    try {
        auto report = tracer.trace(ev);
        std::cout << "trace accepted\n";
        std::cout << "manipulator: " << printable_or_hex(report.manipulator.rid)
                  << "\n";
        std::cout << "driver: "
                  << (report.driver == identity::DriverType::kHuman
                          ? "human"
                          : "ai-proxy")
                  << "\n";
        std::cout << "identity records fetched: " << report.mit_fetches << "\n";
        for (const auto& [name, ok] : report.checks)
            std::cout << "  check " << name << ": " << (ok ? "pass" : "fail")
                      << "\n";
        return 0;
    } catch (const protocol::TraceRejected& r) {
        std::cerr << "accusation rejected: " << protocol::abort_name(r.reason)
                  << "\n";
        return 2;
    }
}

// ---------------------------------------------------------------------------
// Security games.

Json outcome_histogram(const std::map<std::string, size_t>& m) {
    Json j = Json::object();
    for (const auto& [k, v] : m) j[k] = v;
    return j;
}

int cmd_secgames(const GlobalOpts& g, const std::string& game,
                 size_t attempts) {
    auto rng = make_rng(g, "secgames:" + game);
    Json out;
    out["game"] = game;
    out["attempts"] = attempts;
    if (g.seed >= 0) out["seed"] = g.seed;

    if (game == "os-euf" || game == "ps-euf") {
        // Unforgeability games need a group with visible exponents; they run
        // on the transparent backend regardless of the ambient choice.
        Params p = Params::transparent(g.toy_order);
        out["backend"] = p.suite_name();
        size_t solved = 0, extracted = 0;
        size_t sweep_checked = 0, sweep_passed = 0;
        std::map<std::string, size_t> cheat_hist, honest_hist;
        constexpr size_t kBudget = 8;

        for (size_t i = 0; i < attempts; i++) {
            auto inst = secgames::random_instance(p, *rng);
            secgames::GameConfig gc;
            gc.q_h = kBudget;
            secgames::GameResult res;
            bilinear::GroupElement want = p.generator(bilinear::Group::kG);
            if (game == "os-euf") {
                size_t j = 1 + rng->u64() % kBudget;
                size_t w = 1 + rng->u64() % kBudget;
                gc.guess = std::make_pair(j, w);
                secgames::CheatingOsAdversary adv(inst.a, j, w);
                res = secgames::run_os_euf_simulation(p, inst, adv, *rng, gc);
                want = p.pow(inst.g, p.s_mul(inst.a, inst.b));
            } else {
                size_t j = 2 + rng->u64() % (kBudget - 1);
                gc.guess = std::make_pair(j, size_t{0});
                secgames::CheatingPsAdversary adv(inst.b, j);
                res = secgames::run_ps_euf_simulation(p, inst, adv, *rng, gc);
                want = p.pow(inst.g, p.s_mul(inst.a, p.s_inv(inst.b)));
            }
            cheat_hist[secgames::outcome_name(res.outcome)]++;
            if (res.outcome == secgames::Outcome::kSolved) {
                solved++;
                if (res.solution && p.eq(*res.solution, want)) extracted++;
            }

            // Honest run on a fresh instance: every oracle answer must verify
            // under the programmed hash.
            auto inst2 = secgames::random_instance(p, *rng);
            secgames::GameConfig hc;
            hc.q_h = 64;
            secgames::SweepResult sw;
            if (game == "os-euf") {
                secgames::HonestOsAdversary honest(4, 2, 3);
                auto hres =
                    secgames::run_os_euf_simulation(p, inst2, honest, *rng, hc);
                honest_hist[secgames::outcome_name(hres.outcome)]++;
                sw = secgames::verify_os_answers(p, hres.pk_a, hres.pk_b,
                                                 hres.tables);
            } else {
                secgames::HonestPsAdversary honest(5);
                auto hres =
                    secgames::run_ps_euf_simulation(p, inst2, honest, *rng, hc);
                honest_hist[secgames::outcome_name(hres.outcome)]++;
                sw = secgames::verify_ps_answers(p, *hres.ps_init, hres.tables);
            }
            sweep_checked += sw.checked;
            sweep_passed += sw.passed;
        }
        out["cheating_runs"] = outcome_histogram(cheat_hist);
        out["solved"] = solved;
        out["extractions_verified"] = extracted;
        out["honest_runs"] = outcome_histogram(honest_hist);
        out["consistency_sweep"] =
            Json{{"checked", sweep_checked}, {"passed", sweep_passed}};
        std::cout << out.dump(2) << "\n";
        return (solved == attempts && extracted == solved &&
                sweep_checked == sweep_passed)
                   ? 0
                   : 3;
    }

    if (game == "accuse1" || game == "accuse2") {
        Params p = make_params(g);
        out["backend"] = p.suite_name();
        // Ephemeral registry: accusation games never touch simulator state.
        char name[32];
        std::snprintf(name, sizeof name, "cpsim-game-%016llx",
                      static_cast<unsigned long long>(rng->u64()));
        fs::path dir = fs::temp_directory_path() / name;
        fs::create_directories(dir);
        registry::Config cfg;
        cfg.ledger_path = (dir / "ledger.bin").string();
        cfg.trusted_store_path = (dir / "trusted.bin").string();
        cfg.idp_key_path = (dir / "idp.key").string();
        cfg.authority_token = "game-token";
        int rc = 0;
        try {
            registry::Registry reg(p, cfg, *rng);
            auto target = secgames::make_accusation_target(p, reg, *rng);
            auto res = game == "accuse1"
                           ? secgames::false_accusation_case1(
                                 p, reg, cfg.authority_token, target, attempts,
                                 *rng)
                           : secgames::false_accusation_case2(
                                 p, reg, cfg.authority_token, target, attempts,
                                 *rng);
            out["rejected"] = res.rejected;
            out["rejection_rate"] = res.rejection_rate();
            out["vacuous"] = res.vacuous;
            if (!res.warning.empty()) out["warning"] = res.warning;
            Json reasons = Json::object();
            for (const auto& [k, v] : res.reject_reasons) reasons[k] = v;
            out["reject_reasons"] = reasons;
            std::cout << out.dump(2) << "\n";
            rc = res.rejection_rate() == 1.0 ? 0 : 3;
        } catch (...) {
            std::error_code ec;
            fs::remove_all(dir, ec);
            throw;
        }
        std::error_code ec;
        fs::remove_all(dir, ec);
        return rc;
    }

    throw CLI::ValidationError(
        "game must be one of os-euf, ps-euf, accuse1, accuse2");
}

// ---------------------------------------------------------------------------
// Benchmarks.

int cmd_bench(const GlobalOpts& g, const std::string& suite, size_t batch,
              const std::string& format, const std::string& out_path,
              unsigned iris_delay_ms) {
    Params p = make_params(g);
    auto rng = make_rng(g, "bench:" + suite);

    bench::BenchReport rep;
    if (suite == "ops") {
        rep = bench::ops_report(p, *rng);
    } else if (suite == "sizes") {
        rep = bench::sizes_report(p, *rng);
    } else if (suite == "timing") {
        std::vector<size_t> batches =
            batch ? std::vector<size_t>{batch}
                  : std::vector<size_t>{10, 20, 30, 40};
        rep = bench::timing_report(p, batches, *rng);
    } else if (suite == "protocols") {
        rep = bench::protocols_report(p, iris_delay_ms, *rng);
    } else {
        throw CLI::ValidationError(
            "suite must be one of ops, sizes, timing, protocols");
    }

    bench::Format f;
    if (format == "table") {
        f = bench::Format::kTable;
    } else if (format == "json-lines") {
        f = bench::Format::kJsonLines;
    } else {
        throw CLI::ValidationError("format must be table or json-lines");
    }

    if (out_path.empty()) {
        bench::emit_report(rep, f, std::cout);
    } else {
        fs::path op(out_path);
        if (op.has_parent_path()) fs::create_directories(op.parent_path());
        std::ofstream out(op, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        bench::emit_report(rep, f, out);
        std::cout << "report written to " << out_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "cpsim — avatar authentication simulator: proxy-signature login, "
        "delegation, mutual authentication, tracing, security games, and "
        "benchmarks"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--state-dir", g.state_dir,
                   "directory holding ledger, credentials, and avatar state")
        ->capture_default_str();
    app.add_option("--ledger-path", g.ledger_path,
                   "override the identity-ledger file");
    app.add_option("--trusted-store-path", g.trusted_store_path,
                   "override the serial-to-identity store file");
    app.add_option("--idp-key-path", g.idp_key_path,
                   "override the issuer key file");
    app.add_option("--authority-token", g.authority_token,
                   "token unlocking the serial-to-identity store")
        ->capture_default_str();
    app.add_option("--transport", g.transport,
                   "loopback or tcp:<host:port> (port 0 = ephemeral)")
        ->capture_default_str();
    app.add_option("--backend", g.backend,
                   "production or transparent (default: $CPS_BACKEND, then "
                   "production)");
    app.add_option("--toy-order", g.toy_order,
                   "group order for the transparent backend")
        ->capture_default_str();
    app.add_option("--seed", g.seed,
                   "deterministic randomness seed (default: system RNG)");

    std::string user, proxy, avatar, verifier, info, appearance = "avatar look";
    std::string evidence, game = "os-euf", suite = "ops", format = "table",
                          out_path;
    int64_t iris_seed = -1;
    double iris_noise = 0.02;
    unsigned iris_delay = 0;
    size_t attempts = 10, batch = 0;

    auto* c_register =
        app.add_subcommand("register", "enroll a participant with the issuer");
    c_register->add_option("--user", user, "participant name")->required();
    c_register->add_option("--info", info, "issuance note on the record");
    c_register->add_option("--iris-seed", iris_seed,
                           "enrollment seed (default: derived from the name)");

    auto* c_login = app.add_subcommand("login", "authenticate into an avatar");
    c_login->add_option("--user", user)->required();
    c_login->add_option("--avatar", avatar)->required();
    c_login->add_option("--appearance", appearance,
                        "avatar description signed at login")
        ->capture_default_str();
    c_login->add_option("--iris-noise", iris_noise)->capture_default_str();
    c_login->add_option("--iris-delay", iris_delay,
                        "capture latency stand-in, ms");

    auto* c_delegate = app.add_subcommand(
        "delegate", "hand a logged-in avatar over to an AI proxy");
    c_delegate->add_option("--user", user)->required();
    c_delegate->add_option("--proxy", proxy)->required();
    c_delegate->add_option("--avatar", avatar)->required();
    c_delegate->add_option("--iris-noise", iris_noise)->capture_default_str();
    c_delegate->add_option("--iris-delay", iris_delay);

    auto* c_interact = app.add_subcommand(
        "interact", "mutual authentication toward a verifier, retaining "
                    "trace evidence");
    c_interact->add_option("--avatar", avatar)->required();
    c_interact->add_option("--verifier", verifier)->required();
    c_interact->add_option("--iris-noise", iris_noise)->capture_default_str();
    c_interact->add_option("--iris-delay", iris_delay);

    auto* c_trace = app.add_subcommand(
        "trace", "resolve retained evidence back to the physical identity");
    c_trace->add_option("--avatar", avatar,
                        "avatar whose stored evidence to trace");
    c_trace->add_option("--evidence", evidence, "explicit evidence file");

    auto* c_secgames = app.add_subcommand(
        "secgames", "unforgeability-game simulations and false-accusation "
                    "harnesses");
    c_secgames
        ->add_option("--game", game, "os-euf, ps-euf, accuse1, or accuse2")
        ->required();
    c_secgames->add_option("--attempts", attempts)->capture_default_str();

    auto* c_bench =
        app.add_subcommand("bench", "operation counts, sizes, and timings");
    c_bench->add_option("--suite", suite, "ops, sizes, timing, or protocols")
        ->required();
    c_bench->add_option("--batch", batch,
                        "timing batch size (default: 10,20,30,40)");
    c_bench->add_option("--format", format, "table or json-lines")
        ->capture_default_str();
    c_bench->add_option("--out", out_path, "write the report to a file");
    c_bench->add_option("--iris-delay", iris_delay,
                        "capture latency for the protocols suite, ms");

    CLI11_PARSE(app, argc, argv);

    try {
        protocol::ClientOptions opts{iris_noise, iris_delay};
        if (*c_register) return cmd_register(g, user, info, iris_seed);
        if (*c_login) return cmd_login(g, user, avatar, appearance, opts);
        if (*c_delegate) return cmd_delegate(g, user, proxy, avatar, opts);
        if (*c_interact) return cmd_interact(g, avatar, verifier, opts);
        if (*c_trace) {
            if (avatar.empty() && evidence.empty())
                throw CLI::ValidationError("trace needs --avatar or --evidence");
            return cmd_trace(g, avatar, evidence);
        }
        if (*c_secgames) return cmd_secgames(g, game, attempts);
        if (*c_bench)
            return cmd_bench(g, suite, batch, format, out_path, iris_delay);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
