#pragma once

#include "cps/bls381/curve_detail.hpp"
#include "cps/bls381/fp.hpp"

namespace cps::bls381 {

// G1: the order-r subgroup of E(Fp): y^2 = x^3 + 4.

struct FpOps {
    using F = Fp;
    static F zero() { return Fp::zero(); }
    static F one() { return Fp::one(); }
    static F add(const F& a, const F& b) { return fp_add(a, b); }
    static F sub(const F& a, const F& b) { return fp_sub(a, b); }
    static F dbl(const F& a) { return fp_dbl(a); }
    static F neg(const F& a) { return fp_neg(a); }
    static F mul(const F& a, const F& b) { return fp_mul(a, b); }
    static F sqr(const F& a) { return fp_sqr(a); }
    static F inv(const F& a) { return fp_inv(a); }
    static F b_coeff() { return fp_from_u64(4); }
};

using G1Curve = ec::Curve<FpOps>;
using G1 = G1Curve::Pt;

const G1& g1_generator();
inline G1 g1_identity() { return G1Curve::infinity(); }
inline bool g1_is_identity(const G1& p) { return G1Curve::is_infinity(p); }
inline G1 g1_add(const G1& a, const G1& b) { return G1Curve::add(a, b); }
inline G1 g1_dbl(const G1& a) { return G1Curve::dbl(a); }
inline G1 g1_neg(const G1& a) { return G1Curve::neg(a); }
inline G1 g1_mul(const G1& a, BytesView k_be) { return G1Curve::mul(a, k_be); }
inline bool g1_eq(const G1& a, const G1& b) { return G1Curve::eq(a, b); }
inline bool g1_on_curve(const G1& a) { return G1Curve::on_curve(a); }
bool g1_in_subgroup(const G1& a);

// big-endian bytes of the subgroup order r (32 bytes)
const Bytes& r_order_bytes();

// 48-byte compressed encoding (3 flag bits in the top byte)
std::array<uint8_t, 48> g1_serialize(const G1& p);
// strict: canonical field element, on curve, in the r-subgroup
bool g1_deserialize(BytesView b, G1& out);

}  // namespace cps::bls381
