#include "cps/registry.hpp"

#include <fstream>
#include <mutex>

namespace cps::registry {

using bilinear::Params;

Digest chain_digest(uint64_t index, const Digest& prev, BytesView payload) {
    Sha256 h;
    Bytes idx;
    put_u64(idx, index);
    h.update(idx).update(prev).update(payload);
    return h.finish();
}

namespace {

Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RegistryError("cannot open " + path.string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void append_record(const std::filesystem::path& path, BytesView record) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw RegistryError("cannot write " + path.string());
    Bytes framed;
    put_u32(framed, uint32_t(record.size()));
    framed.insert(framed.end(), record.begin(), record.end());
    out.write(reinterpret_cast<const char*>(framed.data()), std::streamsize(framed.size()));
    if (!out) throw RegistryError("short write to " + path.string());
}

Digest read_digest(ByteReader& r) {
    Digest d;
    Bytes b = r.fixed(d.size());
    std::copy(b.begin(), b.end(), d.begin());
    return d;
}

identity::SerialNumber read_sn16(ByteReader& r) {
    identity::SerialNumber sn;
    Bytes b = r.fixed(sn.size());
    std::copy(b.begin(), b.end(), sn.begin());
    return sn;
}

}  // namespace

Registry::Registry(const Params& p, Config cfg, RandomSource& rng)
    : p_(p), cfg_(std::move(cfg)) {
    load_or_create_idp_key(rng);
    load_ledger();
    load_trusted_store();
}

void Registry::load_or_create_idp_key(RandomSource& rng) {
    if (std::filesystem::exists(cfg_.idp_key_path)) {
        Bytes b = read_file(cfg_.idp_key_path);
        auto sk = p_.scalar_from_bytes(b);
        auto g = p_.generator(bilinear::Group::kG);
        auto ghat = p_.generator(bilinear::Group::kGhat);
        idp_ = {sk, {p_.pow(g, sk), p_.pow(ghat, sk)}};
        return;
    }
    idp_ = scheme::keygen(p_, rng);
    std::ofstream out(cfg_.idp_key_path, std::ios::binary | std::ios::trunc);
    if (!out) throw RegistryError("cannot write " + cfg_.idp_key_path.string());
    Bytes b = p_.scalar_to_bytes(idp_.sk);
    out.write(reinterpret_cast<const char*>(b.data()), std::streamsize(b.size()));
}

void Registry::load_ledger() {
    if (!std::filesystem::exists(cfg_.ledger_path)) return;
    Bytes all = read_file(cfg_.ledger_path);
    ByteReader r(all);
    Digest prev{};  // genesis
    uint64_t index = 0;
    try {
        while (!r.done()) {
            Bytes rec = r.blob(1 << 28);
            ByteReader er(rec);
            LedgerEntry e;
            e.index = er.u64();
            e.prev_digest = read_digest(er);
            e.payload = er.blob(1 << 28);
            e.entry_digest = read_digest(er);
            er.expect_end();
            if (e.index != index || e.prev_digest != prev ||
                e.entry_digest != chain_digest(e.index, e.prev_digest, e.payload))
                throw ChainCorrupt("ledger digest chain broken at entry " +
                                   std::to_string(index));
            prev = e.entry_digest;
            ++index;
            auto mit = identity::decode_mit(p_, e.payload);
            by_sn_[mit.sn] = mit;
            entries_.push_back(std::move(e));
        }
    } catch (const CodecError& e) {
        throw ChainCorrupt(std::string("ledger unreadable: ") + e.what());
    }
}

void Registry::load_trusted_store() {
    if (!std::filesystem::exists(cfg_.trusted_store_path)) return;
    Bytes all = read_file(cfg_.trusted_store_path);
    ByteReader r(all);
    try {
        while (!r.done()) {
            Bytes rec = r.blob(1 << 24);
            ByteReader er(rec);
            auto sn = read_sn16(er);
            identity::UserId id;
            id.rid = er.blob();
            id.mid = er.blob();
            er.expect_end();
            mids_.insert(id.mid);
            trusted_[sn] = std::move(id);
        }
    } catch (const CodecError& e) {
        throw RegistryError(std::string("trusted store unreadable: ") + e.what());
    }
}

void Registry::append_ledger(BytesView payload) {
    LedgerEntry e;
    e.index = entries_.size();
    e.prev_digest = entries_.empty() ? Digest{} : entries_.back().entry_digest;
    e.payload = Bytes(payload.begin(), payload.end());
    e.entry_digest = chain_digest(e.index, e.prev_digest, e.payload);
    ByteWriter w;
    w.u64(e.index);
    w.fixed(e.prev_digest);
    w.blob(e.payload);
    w.fixed(e.entry_digest);
    append_record(cfg_.ledger_path, w.peek());
    entries_.push_back(std::move(e));
}

void Registry::append_trusted(const identity::SerialNumber& sn,
                              const identity::UserId& id) {
    ByteWriter w;
    w.fixed(sn);
    w.blob(id.rid);
    w.blob(id.mid);
    append_record(cfg_.trusted_store_path, w.peek());
    trusted_[sn] = id;
    mids_.insert(id.mid);
}

Registry::RegisterResult Registry::register_user(const identity::UserId& id,
                                                 const scheme::PublicKey& pk,
                                                 const biometric::IrisTemplate& T,
                                                 BytesView info, RandomSource& rng) {
    if (id.rid.empty()) throw std::invalid_argument("rid must be non-empty");
    if (!biometric::well_formed(T)) throw std::invalid_argument("malformed iris template");
    std::unique_lock lock(mu_);
    if (!id.mid.empty() && mids_.count(id.mid)) throw DuplicateMid();
    if (!scheme::pk_valid(p_, pk)) throw InvalidKey();

    identity::UserId assigned = id;
    while (assigned.mid.empty() || mids_.count(assigned.mid)) {
        assigned.mid = rng.bytes(16);
    }

    identity::MIT mit;
    do {
        auto sn = rng.bytes(mit.sn.size());
        std::copy(sn.begin(), sn.end(), mit.sn.begin());
    } while (by_sn_.count(mit.sn));
    mit.pk = pk;
    mit.T = T;
    mit.info = Bytes(info.begin(), info.end());
    auto body = identity::mit_signing_body(p_, mit);
    mit.idp_sig = scheme::serialize_original(p_, scheme::dgen(p_, idp_.sk, body, idp_.pk, rng));

    append_ledger(identity::encode_mit(p_, mit));
    append_trusted(mit.sn, assigned);
    by_sn_[mit.sn] = mit;
    return {std::move(mit), std::move(assigned)};
}

identity::MIT Registry::get_mit(const identity::SerialNumber& sn) const {
    std::shared_lock lock(mu_);
    auto it = by_sn_.find(sn);
    if (it == by_sn_.end()) throw UnknownSn();
    return it->second;
}

identity::UserId Registry::resolve_sn(const identity::SerialNumber& sn,
                                      std::string_view authority_token) const {
    std::shared_lock lock(mu_);
    if (authority_token.empty() || authority_token != cfg_.authority_token)
        throw Unauthorized();
    auto it = trusted_.find(sn);
    if (it == trusted_.end()) throw UnknownSn();
    return it->second;
}

bool Registry::verify_chain() const {
    std::shared_lock lock(mu_);
    Digest prev{};
    for (size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.index != i || e.prev_digest != prev ||
            e.entry_digest != chain_digest(e.index, e.prev_digest, e.payload))
            return false;
        prev = e.entry_digest;
    }
    return true;
}

size_t Registry::entry_count() const {
    std::shared_lock lock(mu_);
    return entries_.size();
}

std::vector<LedgerEntry> Registry::ledger_snapshot() const {
    std::shared_lock lock(mu_);
    return entries_;
}

bool EndorsementCache::check(const Params& p, const scheme::PublicKey& idp_pk,
                             const identity::MIT& m) {
    Digest key = sha256(identity::encode_mit(p, m));
    {
        std::shared_lock lock(mu_);
        auto it = seen_.find(key);
        if (it != seen_.end()) return it->second;
    }
    bool ok = identity::verify_endorsement(p, idp_pk, m);
    std::unique_lock lock(mu_);
    seen_[key] = ok;
    return ok;
}

}  // namespace cps::registry
