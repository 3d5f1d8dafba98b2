#include "cps/bls381/g2.hpp"

#include "cps/bls381/g1.hpp"  // r_order_bytes

namespace cps::bls381 {

namespace {

Fp fp_from_hex(const char* h) {
    Fp f;
    if (!fp_from_bytes(from_hex(h), f)) throw std::logic_error("bad Fp constant");
    return f;
}

}  // namespace

const G2& g2_generator() {
    static const G2 gen = [] {
        Fp2 x{fp_from_hex(
                  "024aa2b2f08f0a91260805272dc51051c6e47ad4fa403b02b4510b647ae3d177"
                  "0bac0326a805bbefd48056c8c121bdb8"),
              fp_from_hex(
                  "13e02b6052719f607dacd3a088274f65596bd0d09920b61ab5da61bbdc7f5049"
                  "334cf11213945d57e5ac7d055d042b7e")};
        Fp2 y{fp_from_hex(
                  "0ce5d527727d6e118cc9cdc6da2e351aadfd9baa8cbdd3a76d429a695160d12c"
                  "923ac9cc3baca289e193548608b82801"),
              fp_from_hex(
                  "0606c4a02ea734cc32acd2b02bc28b99cb3e287e85a763af267492ab572e99ab"
                  "3f370d275cec1da1aaa9075ff05f79be")};
        return G2Curve::from_affine(x, y);
    }();
    return gen;
}

bool g2_in_subgroup(const G2& a) {
    if (!g2_on_curve(a)) return false;
    return g2_is_identity(g2_mul(a, r_order_bytes()));
}

std::array<uint8_t, 96> g2_serialize(const G2& p) {
    std::array<uint8_t, 96> out{};
    if (g2_is_identity(p)) {
        out[0] = 0xc0;
        return out;
    }
    Fp2 x, y;
    G2Curve::to_affine(p, x, y);
    auto hi = fp_to_bytes(x.c1);
    auto lo = fp_to_bytes(x.c0);
    std::copy(hi.begin(), hi.end(), out.begin());
    std::copy(lo.begin(), lo.end(), out.begin() + 48);
    if (f2_gt(y, f2_neg(y))) out[0] |= 0x20;
    out[0] |= 0x80;
    return out;
}

bool g2_deserialize(BytesView b, G2& out) {
    if (b.size() != 96) return false;
    uint8_t flags = b[0];
    if (!(flags & 0x80)) return false;
    bool inf = flags & 0x40;
    bool sort = flags & 0x20;
    Bytes raw(b.begin(), b.end());
    raw[0] &= 0x1f;
    if (inf) {
        if (sort) return false;
        for (auto c : raw)
            if (c) return false;
        out = g2_identity();
        return true;
    }
    Fp xc1, xc0;
    if (!fp_from_bytes(BytesView(raw).subspan(0, 48), xc1)) return false;
    if (!fp_from_bytes(BytesView(raw).subspan(48, 48), xc0)) return false;
    Fp2 x{xc0, xc1};
    Fp2 rhs = f2_add(f2_mul(f2_sqr(x), x), Fp2Ops::b_coeff());
    Fp2 y;
    if (!f2_sqrt(rhs, y)) return false;
    if (f2_gt(y, f2_neg(y)) != sort) y = f2_neg(y);
    G2 p = G2Curve::from_affine(x, y);
    if (!g2_in_subgroup(p)) return false;
    out = p;
    return true;
}

}  // namespace cps::bls381
