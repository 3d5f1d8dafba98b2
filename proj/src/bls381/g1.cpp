#include "cps/bls381/g1.hpp"

namespace cps::bls381 {

namespace {

Fp fp_from_hex(const char* h) {
    Fp f;
    if (!fp_from_bytes(from_hex(h), f)) throw std::logic_error("bad Fp constant");
    return f;
}

}  // namespace

const Bytes& r_order_bytes() {
    static const Bytes r = from_hex(
        "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001");
    return r;
}

const G1& g1_generator() {
    static const G1 gen = [] {
        Fp x = fp_from_hex(
            "17f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac58"
            "6c55e83ff97a1aeffb3af00adb22c6bb");
        Fp y = fp_from_hex(
            "08b3f481e3aaa0f1a09e30ed741d8ae4fcf5e095d5d00af600db18cb2c04b3ed"
            "d03cc744a2888ae40caa232946c5e7e1");
        return G1Curve::from_affine(x, y);
    }();
    return gen;
}

bool g1_in_subgroup(const G1& a) {
    if (!g1_on_curve(a)) return false;
    return g1_is_identity(g1_mul(a, r_order_bytes()));
}

std::array<uint8_t, 48> g1_serialize(const G1& p) {
    std::array<uint8_t, 48> out{};
    if (g1_is_identity(p)) {
        out[0] = 0xc0;  // compressed | infinity
        return out;
    }
    Fp x, y;
    G1Curve::to_affine(p, x, y);
    out = fp_to_bytes(x);
    if (fp_gt(y, fp_neg(y))) out[0] |= 0x20;  // sort bit: y is the larger root
    out[0] |= 0x80;                           // compressed
    return out;
}

bool g1_deserialize(BytesView b, G1& out) {
    if (b.size() != 48) return false;
    uint8_t flags = b[0];
    if (!(flags & 0x80)) return false;  // only compressed form is accepted
    bool inf = flags & 0x40;
    bool sort = flags & 0x20;
    Bytes xb(b.begin(), b.end());
    xb[0] &= 0x1f;
    if (inf) {
        if (sort) return false;
        for (auto c : xb)
            if (c) return false;  // identity must be all-zero payload
        out = g1_identity();
        return true;
    }
    Fp x;
    if (!fp_from_bytes(xb, x)) return false;
    Fp rhs = fp_add(fp_mul(fp_sqr(x), x), fp_from_u64(4));
    Fp y;
    if (!fp_sqrt(rhs, y)) return false;
    if (fp_gt(y, fp_neg(y)) != sort) y = fp_neg(y);
    G1 p = G1Curve::from_affine(x, y);
    if (!g1_in_subgroup(p)) return false;  // rejects the cofactor coset
    out = p;
    return true;
}

}  // namespace cps::bls381
