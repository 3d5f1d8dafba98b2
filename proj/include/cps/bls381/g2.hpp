#pragma once

#include "cps/bls381/curve_detail.hpp"
#include "cps/bls381/fp2.hpp"

namespace cps::bls381 {

// G2: the order-r subgroup of the sextic twist E'(Fp2): y^2 = x^3 + 4(1+u).

struct Fp2Ops {
    using F = Fp2;
    static F zero() { return Fp2::zero(); }
    static F one() { return Fp2::one(); }
    static F add(const F& a, const F& b) { return f2_add(a, b); }
    static F sub(const F& a, const F& b) { return f2_sub(a, b); }
    static F dbl(const F& a) { return f2_dbl(a); }
    static F neg(const F& a) { return f2_neg(a); }
    static F mul(const F& a, const F& b) { return f2_mul(a, b); }
    static F sqr(const F& a) { return f2_sqr(a); }
    static F inv(const F& a) { return f2_inv(a); }
    static F b_coeff() { return Fp2{fp_from_u64(4), fp_from_u64(4)}; }
};

using G2Curve = ec::Curve<Fp2Ops>;
using G2 = G2Curve::Pt;

const G2& g2_generator();
inline G2 g2_identity() { return G2Curve::infinity(); }
inline bool g2_is_identity(const G2& p) { return G2Curve::is_infinity(p); }
inline G2 g2_add(const G2& a, const G2& b) { return G2Curve::add(a, b); }
inline G2 g2_neg(const G2& a) { return G2Curve::neg(a); }
inline G2 g2_mul(const G2& a, BytesView k_be) { return G2Curve::mul(a, k_be); }
inline bool g2_eq(const G2& a, const G2& b) { return G2Curve::eq(a, b); }
inline bool g2_on_curve(const G2& a) { return G2Curve::on_curve(a); }
bool g2_in_subgroup(const G2& a);

// 96-byte compressed encoding: flags on byte 0, x.c1 || x.c0 big-endian
std::array<uint8_t, 96> g2_serialize(const G2& p);
bool g2_deserialize(BytesView b, G2& out);

}  // namespace cps::bls381
