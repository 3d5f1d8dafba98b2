#include "cps/scheme.hpp"

#include <stdexcept>

namespace cps::scheme {

using bilinear::Group;
using bilinear::GroupElement;
using bilinear::HashCharge;
using bilinear::Params;

KeyPair keygen(const Params& p, RandomSource& rng) {
    auto sk = p.random_nonzero_scalar(rng);
    PublicKey pk{p.pow(p.generator(Group::kG), sk),
                 p.pow(p.generator(Group::kGhat), sk)};
    return {std::move(sk), std::move(pk)};
}

bool pk_valid(const Params& p, const PublicKey& pk) {
    if (p.is_identity(pk.y1) || p.is_identity(pk.y2)) return false;
    return p.pair_eq(pk.y1, p.generator(Group::kGhat), p.generator(Group::kG), pk.y2);
}

ChameleonHash chameleon_hash(const Params& p, BytesView M, const PublicKey& pk,
                             RandomSource& rng) {
    auto m = p.hash_to_group(M, HashCharge::kFree);
    auto r = p.random_nonzero_scalar(rng);
    auto h = p.mul(m, p.pow(pk.y1, r));
    auto R = p.pow(p.generator(Group::kG), r);
    return {std::move(h), std::move(R), std::move(r)};
}

bool check_chameleon(const Params& p, const PublicKey& pk, const GroupElement& h,
                     BytesView M, const GroupElement& R) {
    auto m = p.hash_to_group(M, HashCharge::kCountExp);
    auto lhs = p.div(h, m);
    return p.pair_eq(lhs, p.generator(Group::kGhat), R, pk.y2);
}

ChameleonTuple dgen(const Params& p, const bilinear::FieldScalar& sk_A, BytesView M,
                    const PublicKey& pk_B, RandomSource& rng) {
    ChameleonHash ch = chameleon_hash(p, M, pk_B, rng);
    auto sigma = p.pow(ch.h, sk_A);
    return {std::move(ch.h), Bytes(M.begin(), M.end()), std::move(ch.R),
            std::move(sigma)};
}

bool pver(const Params& p, const PublicKey& pk_A, const ChameleonTuple& tuple,
          const PublicKey& pk_B) {
    if (!tuple.sigma) throw std::invalid_argument("pver: tuple carries no sigma");
    if (p.is_identity(tuple.h)) return false;
    if (!p.pair_eq(*tuple.sigma, p.generator(Group::kGhat), tuple.h, pk_A.y2))
        return false;
    return check_chameleon(p, pk_B, tuple.h, tuple.M, tuple.R);
}

GroupElement psig(const Params& p, const bilinear::FieldScalar& sk_B,
                  const GroupElement& h, BytesView M_prime) {
    auto m = p.hash_to_group(M_prime, HashCharge::kCountExp);
    auto base = p.div(h, m);
    return p.pow(base, p.s_inv(sk_B));
}

Bytes serialize_original(const Params& p, const ChameleonTuple& t) {
    if (!t.sigma) throw std::invalid_argument("original signature requires sigma");
    ByteWriter w;
    w.u8(kTagOriginal);
    w.fixed(p.serialize(*t.sigma));
    w.fixed(p.serialize(t.h));
    w.fixed(p.serialize(t.R));
    return w.take();
}

ChameleonTuple parse_original(const Params& p, BytesView sig, BytesView M) {
    ByteReader r(sig);
    if (r.u8() != kTagOriginal) throw CodecError("not an original signature");
    size_t n = p.element_bytes(Group::kG);
    auto sigma = p.deserialize(Group::kG, r.fixed(n));
    auto h = p.deserialize(Group::kG, r.fixed(n));
    auto R = p.deserialize(Group::kG, r.fixed(n));
    r.expect_end();
    return {std::move(h), Bytes(M.begin(), M.end()), std::move(R), std::move(sigma)};
}

Bytes serialize_proxy(const Params& p, const GroupElement& R_prime) {
    ByteWriter w;
    w.u8(kTagProxy);
    w.fixed(p.serialize(R_prime));
    return w.take();
}

GroupElement parse_proxy(const Params& p, BytesView sig) {
    ByteReader r(sig);
    if (r.u8() != kTagProxy) throw CodecError("not a proxy signature");
    auto R = p.deserialize(Group::kG, r.fixed(p.element_bytes(Group::kG)));
    r.expect_end();
    return R;
}

Bytes serialize_pubkey(const Params& p, const PublicKey& pk) {
    ByteWriter w;
    w.fixed(p.serialize(pk.y1));
    w.fixed(p.serialize(pk.y2));
    return w.take();
}

PublicKey parse_pubkey(const Params& p, BytesView b) {
    ByteReader r(b);
    auto y1 = p.deserialize(Group::kG, r.fixed(p.element_bytes(Group::kG)));
    auto y2 = p.deserialize(Group::kGhat, r.fixed(p.element_bytes(Group::kGhat)));
    r.expect_end();
    return {std::move(y1), std::move(y2)};
}

}  // namespace cps::scheme
