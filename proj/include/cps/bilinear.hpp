#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <variant>

#include "cps/bls381/fp12.hpp"
#include "cps/bls381/g1.hpp"
#include "cps/bls381/g2.hpp"
#include "cps/bytes.hpp"
#include "cps/counters.hpp"
#include "cps/rng.hpp"

namespace cps::bilinear {

enum class Backend : uint8_t {
    kProduction,   // real pairing curve (381-bit base field, 255-bit order)
    kTransparent,  // known-exponent test double over a toy prime order
};

// Group role of an element. The production backend is asymmetric, so the two
// source groups are distinct; the transparent backend is symmetric and only
// uses the tag for shape checking.
enum class Group : uint8_t { kG = 1, kGhat = 2, kGT = 3 };

// Whether a hash_to_group call books one exponentiation in the E/M/P model
// for its final cofactor multiplication. The delegation path books only its
// explicit exponentiations; the proxy-signing and verification paths book the
// hash's cofactor step as one E (the accounting convention the operation-count
// conformance tests pin down; see bench docs).
enum class HashCharge : uint8_t { kFree, kCountExp };

// Scalar in [0, q) where q is the group order of the owning Params.
class FieldScalar {
  public:
    FieldScalar() = default;
    const mpz_class& value() const { return v_; }

  private:
    friend class Params;
    FieldScalar(uint32_t pid, mpz_class v) : pid_(pid), v_(std::move(v)) {}
    uint32_t pid_ = 0;
    mpz_class v_;
};

// Element of G, Ghat or GT, tagged with its group. Opaque: all arithmetic
// goes through Params so that both backends share one call surface and the
// operation counters see identical traffic.
class GroupElement {
  public:
    GroupElement() = default;
    Group group() const { return group_; }

  private:
    friend class Params;
    using Payload = std::variant<mpz_class, bls381::G1, bls381::G2, bls381::Fp12>;
    GroupElement(uint32_t pid, Group g, Payload v)
        : pid_(pid), group_(g), v_(std::move(v)) {}
    uint32_t pid_ = 0;
    Group group_ = Group::kG;
    Payload v_;
};

// Immutable parameter set: the concrete suite, its prime order q, generators,
// the pairing, and the message-to-group hash (domain tag "CPS-H-v1").
// Copies share the underlying suite. Thread-safe after construction.
class Params {
  public:
    // Real curve; 255-bit prime order.
    static Params production();
    // Known-exponent test double of the given prime order. Not a security
    // level in any sense; guarded by an explicit opt-in flag at the CLI.
    static Params transparent(uint64_t order = 1009);

    Backend backend() const;
    bool is_transparent() const;
    const std::string& suite_name() const;
    const mpz_class& order() const;           // q
    size_t element_bytes(Group g) const;      // fixed encoding width
    size_t scalar_bytes() const;              // fixed big-endian width

    GroupElement generator(Group g) const;    // g, ghat, gt = pair(g, ghat)
    GroupElement identity(Group g) const;

    // group arithmetic -------------------------------------------------
    GroupElement mul(const GroupElement& a, const GroupElement& b) const;
    GroupElement div(const GroupElement& a, const GroupElement& b) const;
    GroupElement inverse(const GroupElement& a) const;
    GroupElement pow(const GroupElement& a, const FieldScalar& k) const;
    bool eq(const GroupElement& a, const GroupElement& b) const;
    bool is_identity(const GroupElement& a) const;

    // pairing ----------------------------------------------------------
    // a must lie in G and b in Ghat on the production backend; the
    // transparent backend is symmetric and accepts either source group.
    GroupElement pair(const GroupElement& a, const GroupElement& b) const;
    // pair(a1, b1) == pair(a2, b2), evaluated as one product on the
    // production backend; booked as two pairings either way.
    bool pair_eq(const GroupElement& a1, const GroupElement& b1,
                 const GroupElement& a2, const GroupElement& b2) const;

    // message hashing ----------------------------------------------------
    // Deterministic map into G; never the identity (a one-byte counter is
    // appended and the derivation repeated in that degenerate case).
    GroupElement hash_to_group(BytesView message,
                               HashCharge charge = HashCharge::kFree) const;

    // scalars ------------------------------------------------------------
    FieldScalar scalar_from_u64(uint64_t v) const;
    FieldScalar scalar_from_mpz(const mpz_class& v) const;  // reduced mod q
    FieldScalar random_scalar(RandomSource& rng) const;          // [0, q)
    FieldScalar random_nonzero_scalar(RandomSource& rng) const;  // [1, q)
    FieldScalar s_add(const FieldScalar& a, const FieldScalar& b) const;
    FieldScalar s_sub(const FieldScalar& a, const FieldScalar& b) const;
    FieldScalar s_mul(const FieldScalar& a, const FieldScalar& b) const;
    FieldScalar s_neg(const FieldScalar& a) const;
    FieldScalar s_inv(const FieldScalar& a) const;  // throws on zero
    bool s_eq(const FieldScalar& a, const FieldScalar& b) const;
    bool s_is_zero(const FieldScalar& a) const;
    Bytes scalar_to_bytes(const FieldScalar& s) const;
    FieldScalar scalar_from_bytes(BytesView b) const;  // strict width, < q

    // serialization --------------------------------------------------------
    Bytes serialize(const GroupElement& a) const;
    // Strict: fixed width, canonical coordinates, subgroup membership.
    GroupElement deserialize(Group g, BytesView b) const;

    // test oracle access: the discrete log an element carries on the
    // transparent backend. Throws on the production backend.
    mpz_class discrete_log(const GroupElement& a) const;

  private:
    struct Impl;
    explicit Params(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

// security_level must be 128 (the single supported level). The transparent
// backend substitutes its toy order and exists only behind an explicit flag.
Params setup(int security_level_bits, Backend backend);

}  // namespace cps::bilinear
