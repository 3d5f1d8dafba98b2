#pragma once

#include <optional>

#include "cps/bilinear.hpp"

namespace cps::scheme {

// Dual-component public key: y1 = g^x in G, y2 = ghat^x in Ghat. Both carry
// the same exponent; pk_valid() checks that with one pairing equation and
// must be called whenever a key is loaded from an untrusted source.
struct PublicKey {
    bilinear::GroupElement y1, y2;
};

struct KeyPair {
    bilinear::FieldScalar sk;
    PublicKey pk;
};

// Chameleon-hash output: h = H(M) * y1^r, R = g^r. The randomness r is
// returned only for transcript audit; no protocol transmits it.
struct ChameleonHash {
    bilinear::GroupElement h, R;
    bilinear::FieldScalar r;
};

// A signature tuple (sigma, h, M, R). With sigma it is an original signature
// endorsing the chameleon hash; after a collision it carries the rewritten
// message M' and check parameter R' alongside the unchanged sigma and h.
struct ChameleonTuple {
    bilinear::GroupElement h;
    Bytes M;
    bilinear::GroupElement R;
    std::optional<bilinear::GroupElement> sigma;
};

// sk uniform in [1, q) (zero is resampled); y1 = g^sk, y2 = ghat^sk.
KeyPair keygen(const bilinear::Params& p, RandomSource& rng);

// pair(y1, ghat) == pair(g, y2): the two components carry the same exponent.
bool pk_valid(const bilinear::Params& p, const PublicKey& pk);

// h = H(M) * y1^r with fresh nonzero r; R = g^r.
ChameleonHash chameleon_hash(const bilinear::Params& p, BytesView M,
                             const PublicKey& pk, RandomSource& rng);

// pair(h / H(M), ghat) == pair(R, y2): is (pk, h, M, R) compatible?
bool check_chameleon(const bilinear::Params& p, const PublicKey& pk,
                     const bilinear::GroupElement& h, BytesView M,
                     const bilinear::GroupElement& R);

// Original signature by the delegator A over M toward delegatee B:
// (h, R) = chameleon_hash(M, pk_B), sigma = h^{sk_A}.
ChameleonTuple dgen(const bilinear::Params& p, const bilinear::FieldScalar& sk_A,
                    BytesView M, const PublicKey& pk_B, RandomSource& rng);

// Verify sigma against pk_A (pair(sigma, ghat) == pair(h, y2_A)) and the
// tuple's chameleon consistency against pk_B. Serves for both the original
// and the proxy tuple. Throws if sigma is absent. An identity h is rejected
// outright (adversarial degenerate case).
bool pver(const bilinear::Params& p, const PublicKey& pk_A,
          const ChameleonTuple& tuple, const PublicKey& pk_B);

// Collision: R' = (h / H(M'))^{1/sk_B}. Deterministic. (h, M', R') then
// passes check_chameleon, and {sigma, h, M', R'} passes pver.
bilinear::GroupElement psig(const bilinear::Params& p,
                            const bilinear::FieldScalar& sk_B,
                            const bilinear::GroupElement& h, BytesView M_prime);

// Wire forms: tag byte then fixed-width elements. The message M always
// travels beside the signature, never inside it.
inline constexpr uint8_t kTagOriginal = 0x01;  // sigma, h, R
inline constexpr uint8_t kTagProxy = 0x02;     // R'

Bytes serialize_original(const bilinear::Params& p, const ChameleonTuple& t);
ChameleonTuple parse_original(const bilinear::Params& p, BytesView sig, BytesView M);
Bytes serialize_proxy(const bilinear::Params& p, const bilinear::GroupElement& R_prime);
bilinear::GroupElement parse_proxy(const bilinear::Params& p, BytesView sig);

Bytes serialize_pubkey(const bilinear::Params& p, const PublicKey& pk);
// Decodes and membership-checks both components; the exponent-consistency
// check (pk_valid) is separate and mandatory at trust boundaries.
PublicKey parse_pubkey(const bilinear::Params& p, BytesView b);

}  // namespace cps::scheme
