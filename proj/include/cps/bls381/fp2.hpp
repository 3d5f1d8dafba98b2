#pragma once

#include "cps/bls381/fp.hpp"

namespace cps::bls381 {

// Fp2 = Fp[u]/(u^2 + 1); elements c0 + c1*u. The sextic twist constant is
// xi = 1 + u (a non-square non-cube here), shared with the Fp6/Fp12 tower.
struct Fp2 {
    Fp c0, c1;

    static Fp2 zero() { return {}; }
    static Fp2 one() { return {Fp::one(), Fp::zero()}; }

    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    bool operator==(const Fp2&) const = default;
};

inline Fp2 f2_add(const Fp2& a, const Fp2& b) {
    return {fp_add(a.c0, b.c0), fp_add(a.c1, b.c1)};
}
inline Fp2 f2_sub(const Fp2& a, const Fp2& b) {
    return {fp_sub(a.c0, b.c0), fp_sub(a.c1, b.c1)};
}
inline Fp2 f2_neg(const Fp2& a) { return {fp_neg(a.c0), fp_neg(a.c1)}; }
inline Fp2 f2_dbl(const Fp2& a) { return f2_add(a, a); }
inline Fp2 f2_conj(const Fp2& a) { return {a.c0, fp_neg(a.c1)}; }

// Karatsuba: 3 base multiplications
inline Fp2 f2_mul(const Fp2& a, const Fp2& b) {
    Fp v0 = fp_mul(a.c0, b.c0);
    Fp v1 = fp_mul(a.c1, b.c1);
    Fp s = fp_mul(fp_add(a.c0, a.c1), fp_add(b.c0, b.c1));
    return {fp_sub(v0, v1), fp_sub(fp_sub(s, v0), v1)};
}

inline Fp2 f2_sqr(const Fp2& a) {
    Fp t0 = fp_mul(fp_add(a.c0, a.c1), fp_sub(a.c0, a.c1));  // c0^2 - c1^2
    Fp t1 = fp_mul(a.c0, a.c1);
    return {t0, fp_dbl(t1)};
}

inline Fp2 f2_mul_fp(const Fp2& a, const Fp& k) {
    return {fp_mul(a.c0, k), fp_mul(a.c1, k)};
}

// multiply by xi = 1 + u: (c0 - c1) + (c0 + c1) u
inline Fp2 f2_mul_xi(const Fp2& a) {
    return {fp_sub(a.c0, a.c1), fp_add(a.c0, a.c1)};
}

inline Fp2 f2_inv(const Fp2& a) {
    // 1/(c0 + c1 u) = (c0 - c1 u) / (c0^2 + c1^2)
    Fp norm = fp_add(fp_sqr(a.c0), fp_sqr(a.c1));
    Fp n = fp_inv(norm);
    return {fp_mul(a.c0, n), fp_neg(fp_mul(a.c1, n))};
}

Fp2 f2_pow(const Fp2& base, BytesView exp_be);
bool f2_is_square(const Fp2& a);
// sqrt for p == 3 (mod 4); returns false for non-squares (always verified)
bool f2_sqrt(const Fp2& a, Fp2& out);
bool f2_sgn0(const Fp2& a);
// lexicographic order on (c1, c0) canonical values, for the compression sort bit
bool f2_gt(const Fp2& a, const Fp2& b);

}  // namespace cps::bls381
