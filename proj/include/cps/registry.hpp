#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "cps/hash.hpp"
#include "cps/identity.hpp"

namespace cps::registry {

struct RegistryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownSn : RegistryError {
    UnknownSn() : RegistryError("unknown serial number") {}
};
struct Unauthorized : RegistryError {
    Unauthorized() : RegistryError("caller lacks the tracing-authority credential") {}
};
struct DuplicateMid : RegistryError {
    DuplicateMid() : RegistryError("mid already registered") {}
};
struct InvalidKey : RegistryError {
    InvalidKey() : RegistryError("public key fails consistency check") {}
};
struct ChainCorrupt : RegistryError {
    using RegistryError::RegistryError;
};

// One record of the append-only identity log. The digest chain starts from
// an all-zero genesis digest.
struct LedgerEntry {
    uint64_t index = 0;
    Bytes payload;  // encoded MIT
    Digest prev_digest{};
    Digest entry_digest{};
};

// sha256(index_be64 || prev_digest || payload)
Digest chain_digest(uint64_t index, const Digest& prev, BytesView payload);

struct Config {
    std::filesystem::path ledger_path;
    std::filesystem::path trusted_store_path;
    std::filesystem::path idp_key_path;
    std::string authority_token;
};

// The identity provider plus its two stores: a public hash-chained MIT log
// (the durable public record) and a private serial-number -> identity map
// released only to the tracing authority. Single writer; concurrent readers.
class Registry {
  public:
    // Loads (or initializes) all state under cfg. Throws ChainCorrupt if the
    // persisted ledger fails digest verification. rng feeds key generation
    // when no issuer key exists yet.
    Registry(const bilinear::Params& p, Config cfg, RandomSource& rng);

    const scheme::PublicKey& idp_pk() const { return idp_.pk; }

    struct RegisterResult {
        identity::MIT mit;
        identity::UserId id;  // mid filled in when the caller left it empty
    };

    // Issues a fresh serial number, endorses the record, appends it to the
    // ledger, and stores the private (sn -> id) mapping. An empty id.mid is
    // assigned by the registry. Throws DuplicateMid / InvalidKey /
    // std::invalid_argument (empty rid, malformed template).
    RegisterResult register_user(const identity::UserId& id,
                                 const scheme::PublicKey& pk,
                                 const biometric::IrisTemplate& T, BytesView info,
                                 RandomSource& rng);

    // Public lookup. Callers re-verify the endorsement at trust boundaries.
    identity::MIT get_mit(const identity::SerialNumber& sn) const;

    // Tracing-authority lookup of the registered identity behind a serial
    // number. Requires the configured credential token.
    identity::UserId resolve_sn(const identity::SerialNumber& sn,
                                std::string_view authority_token) const;

    // Recomputes every digest from genesis.
    bool verify_chain() const;

    size_t entry_count() const;
    std::vector<LedgerEntry> ledger_snapshot() const;

  private:
    void load_or_create_idp_key(RandomSource& rng);
    void load_ledger();
    void load_trusted_store();
    void append_ledger(BytesView payload);
    void append_trusted(const identity::SerialNumber& sn, const identity::UserId& id);

    bilinear::Params p_;  // value copy; shares the immutable suite
    Config cfg_;
    scheme::KeyPair idp_;
    std::vector<LedgerEntry> entries_;
    std::map<identity::SerialNumber, identity::MIT> by_sn_;
    std::map<identity::SerialNumber, identity::UserId> trusted_;
    std::set<Bytes> mids_;
    mutable std::shared_mutex mu_;
};

// Memoizes endorsement verification by record content (digest of the full
// encoding), so repeated lookups of the same record cost one signature check
// total while any altered byte forces a fresh check.
class EndorsementCache {
  public:
    bool check(const bilinear::Params& p, const scheme::PublicKey& idp_pk,
               const identity::MIT& m);

  private:
    std::map<Digest, bool> seen_;
    std::shared_mutex mu_;
};

}  // namespace cps::registry
