#pragma once

// Textbook reference pairing used as an independent oracle for the optimized
// Miller loop: the G2 point is untwisted into E(Fp12) and every line is
// computed with affine Fp12 arithmetic straight from the chord/tangent
// definitions. Slow, but it shares no line-evaluation code with the library.

#include "cps/bls381/pairing.hpp"

namespace pairing_ref {

using namespace cps::bls381;

struct P12 {
    Fp12 x, y;
    bool inf = false;
};

inline Fp12 w_pow(int k) {  // w^k as an Fp12 element
    Fp12 w = Fp12::zero();
    w.c1.c0 = Fp2::one();
    Fp12 acc = Fp12::one();
    for (int i = 0; i < k; ++i) acc = f12_mul(acc, w);
    return acc;
}

inline Fp12 embed2(const Fp2& a) {
    Fp12 z = Fp12::zero();
    z.c0.c0 = a;
    return z;
}

inline Fp12 embed1(const Fp& a) { return embed2(Fp2{a, Fp::zero()}); }

// untwist (x', y') -> (x'/w^2, y'/w^3) onto y^2 = x^3 + 4 over Fp12
inline P12 untwist(const G2& q) {
    Fp2 x, y;
    G2Curve::to_affine(q, x, y);
    return {f12_mul(embed2(x), f12_inv(w_pow(2))),
            f12_mul(embed2(y), f12_inv(w_pow(3))), false};
}

inline P12 add_p12(const P12& a, const P12& b) {
    if (a.inf) return b;
    if (b.inf) return a;
    if (a.x == b.x && a.y == f12_mul(embed1(fp_neg(Fp::one())), b.y)) return {{}, {}, true};
    Fp12 lambda;
    if (a.x == b.x && a.y == b.y) {
        Fp12 n = f12_mul(embed1(fp_from_u64(3)), f12_sqr(a.x));
        lambda = f12_mul(n, f12_inv(f12_add(a.y, a.y)));
    } else {
        Fp12 dy = f12_add(b.y, f12_mul(embed1(fp_neg(Fp::one())), a.y));
        Fp12 dx = f12_add(b.x, f12_mul(embed1(fp_neg(Fp::one())), a.x));
        lambda = f12_mul(dy, f12_inv(dx));
    }
    Fp12 mneg = embed1(fp_neg(Fp::one()));
    Fp12 x3 = f12_add(f12_sqr(lambda), f12_mul(mneg, f12_add(a.x, b.x)));
    Fp12 y3 = f12_add(f12_mul(lambda, f12_add(a.x, f12_mul(mneg, x3))),
                      f12_mul(mneg, a.y));
    return {x3, y3, false};
}

// evaluate at embedded P the line through (two positions of) T
inline Fp12 line_eval(const P12& T, const P12& Q, const Fp12& xp, const Fp12& yp) {
    Fp12 mneg = embed1(fp_neg(Fp::one()));
    Fp12 lambda;
    if (T.x == Q.x && T.y == Q.y) {
        lambda = f12_mul(f12_mul(embed1(fp_from_u64(3)), f12_sqr(T.x)),
                         f12_inv(f12_add(T.y, T.y)));
    } else {
        lambda = f12_mul(f12_add(Q.y, f12_mul(mneg, T.y)),
                         f12_inv(f12_add(Q.x, f12_mul(mneg, T.x))));
    }
    // (yP - yT) - lambda (xP - xT)
    return f12_add(f12_add(yp, f12_mul(mneg, T.y)),
                   f12_mul(mneg, f12_mul(lambda, f12_add(xp, f12_mul(mneg, T.x)))));
}

inline Fp12 miller_ref(const G1& p, const G2& q) {
    if (g1_is_identity(p) || g2_is_identity(q)) return Fp12::one();
    Fp px, py;
    G1Curve::to_affine(p, px, py);
    Fp12 xp = embed1(px), yp = embed1(py);
    P12 Q = untwist(q);
    P12 T = Q;
    Fp12 f = Fp12::one();
    constexpr uint64_t kAbsX = 0xd201000000010000ull;
    for (int i = 62; i >= 0; --i) {
        f = f12_mul(f12_sqr(f), line_eval(T, T, xp, yp));
        T = add_p12(T, T);
        if ((kAbsX >> i) & 1) {
            f = f12_mul(f, line_eval(T, Q, xp, yp));
            T = add_p12(T, Q);
        }
    }
    return f12_conj(f);
}

inline Fp12 pairing_ref(const G1& p, const G2& q) {
    return final_exponentiation(miller_ref(p, q));
}

}  // namespace pairing_ref
