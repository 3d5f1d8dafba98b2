#pragma once

#include "cps/bls381/fp6.hpp"

namespace cps::bls381 {

// Fp12 = Fp6[w]/(w^2 - v). Over Fp2 the basis is {1, w, w^2=v, w^3=v w,
// w^4=v^2, w^5=v^2 w}, so w is a sixth root of xi.
struct Fp12 {
    Fp6 c0, c1;

    static Fp12 zero() { return {}; }
    static Fp12 one() { return {Fp6::one(), Fp6::zero()}; }
    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    bool is_one() const { return *this == one(); }
    bool operator==(const Fp12&) const = default;
};

inline Fp12 f12_add(const Fp12& a, const Fp12& b) {
    return {f6_add(a.c0, b.c0), f6_add(a.c1, b.c1)};
}

Fp12 f12_mul(const Fp12& a, const Fp12& b);
Fp12 f12_sqr(const Fp12& a);
Fp12 f12_inv(const Fp12& a);
// conjugation over Fp6 (= Frobenius^6); inverse on the cyclotomic subgroup
inline Fp12 f12_conj(const Fp12& a) { return {a.c0, f6_neg(a.c1)}; }

Fp12 f12_frobenius(const Fp12& a);  // z -> z^p
Fp12 f12_pow(const Fp12& base, BytesView exp_be);

// Sparse multiplication by a Miller-loop line A + B w^2 + C w^3 (A,B,C in Fp2).
Fp12 f12_mul_line(const Fp12& f, const Fp2& A, const Fp2& B, const Fp2& C);

// access in the Fp2-coefficient view c[i] ~ coefficient of w^i
inline Fp2& f12_coeff(Fp12& z, int i) {
    Fp6& h = (i & 1) ? z.c1 : z.c0;
    switch (i >> 1) {
        case 0: return h.c0;
        case 1: return h.c1;
        default: return h.c2;
    }
}
inline const Fp2& f12_coeff(const Fp12& z, int i) {
    return f12_coeff(const_cast<Fp12&>(z), i);
}

}  // namespace cps::bls381
