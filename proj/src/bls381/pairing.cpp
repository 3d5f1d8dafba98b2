#include "cps/bls381/pairing.hpp"

namespace cps::bls381 {

namespace {

// |x| for the BLS parameter x = -0xd201000000010000 (set bits 63,62,60,57,48,16)
constexpr uint64_t kAbsX = 0xd201000000010000ull;

struct MillerTerm {
    Fp xp, yp;  // G1 argument, affine
    G2 t;       // running point on the twist (Jacobian)
    Fp2 qx, qy; // G2 argument, affine (for addition steps)
};

// Tangent line at T evaluated at P, as (A, B, C) with line = A + B w^2 + C w^3.
// Derived from l = yP - y_T' - lambda (xP - x_T') after untwisting
// T' = (x/w^2, y/w^3) and clearing the Fp2 denominator 2YZ^3:
//   A = 3X^3 - 2Y^2, B = -3X^2 Z^2 xP, C = 2 Y Z^3 yP.
void line_dbl(MillerTerm& m, Fp2& A, Fp2& B, Fp2& C) {
    const Fp2& X = m.t.X;
    const Fp2& Y = m.t.Y;
    const Fp2& Z = m.t.Z;
    Fp2 X2 = f2_sqr(X);
    Fp2 X3 = f2_mul(X2, X);
    Fp2 Y2 = f2_sqr(Y);
    Fp2 Z2 = f2_sqr(Z);
    Fp2 Z3 = f2_mul(Z2, Z);
    Fp2 threeX2 = f2_add(f2_dbl(X2), X2);
    A = f2_sub(f2_add(f2_dbl(X3), X3), f2_dbl(Y2));
    B = f2_neg(f2_mul_fp(f2_mul(threeX2, Z2), m.xp));
    C = f2_mul_fp(f2_dbl(f2_mul(Y, Z3)), m.yp);
    m.t = G2Curve::dbl(m.t);
}

// Chord line through T and Q evaluated at P, same representation, scaled by
// the denominator Z*D:  N = Y - yQ Z^3, D = X - xQ Z^2,
//   A = N xQ - yQ Z D, B = -N xP, C = Z D yP.
void line_add(MillerTerm& m, Fp2& A, Fp2& B, Fp2& C) {
    const Fp2& X = m.t.X;
    const Fp2& Y = m.t.Y;
    const Fp2& Z = m.t.Z;
    Fp2 Z2 = f2_sqr(Z);
    Fp2 Z3 = f2_mul(Z2, Z);
    Fp2 N = f2_sub(Y, f2_mul(m.qy, Z3));
    Fp2 D = f2_sub(X, f2_mul(m.qx, Z2));
    Fp2 ZD = f2_mul(Z, D);
    A = f2_sub(f2_mul(N, m.qx), f2_mul(m.qy, ZD));
    B = f2_neg(f2_mul_fp(N, m.xp));
    C = f2_mul_fp(ZD, m.yp);
    m.t = G2Curve::add(m.t, G2Curve::from_affine(m.qx, m.qy));
}

Fp12 miller_multi(std::vector<MillerTerm>& terms) {
    Fp12 f = Fp12::one();
    Fp2 A, B, C;
    for (int i = 62; i >= 0; --i) {
        f = f12_sqr(f);
        for (auto& m : terms) {
            line_dbl(m, A, B, C);
            f = f12_mul_line(f, A, B, C);
        }
        if ((kAbsX >> i) & 1) {
            for (auto& m : terms) {
                line_add(m, A, B, C);
                f = f12_mul_line(f, A, B, C);
            }
        }
    }
    return f12_conj(f);  // x < 0
}

bool make_term(const G1& p, const G2& q, MillerTerm& m) {
    if (g1_is_identity(p) || g2_is_identity(q)) return false;
    G1Curve::to_affine(p, m.xp, m.yp);
    G2Curve::to_affine(q, m.qx, m.qy);
    m.t = G2Curve::from_affine(m.qx, m.qy);
    return true;
}

// f^e on the cyclotomic subgroup; e has bit 63 set for both exponents used
Fp12 pow_abs(const Fp12& f, uint64_t e) {
    Fp12 acc = f;
    for (int i = 62; i >= 0; --i) {
        acc = cyclotomic_sqr(acc);
        if ((e >> i) & 1) acc = f12_mul(acc, f);
    }
    return acc;
}

// f^x and f^(x-1): x < 0, so conjugate (cyclotomic inverse) after |.|-power
Fp12 pow_x(const Fp12& f) { return f12_conj(pow_abs(f, kAbsX)); }
Fp12 pow_x_minus_1(const Fp12& f) { return f12_conj(pow_abs(f, kAbsX + 1)); }

}  // namespace

Fp12 cyclotomic_sqr(const Fp12& a) {
    // Granger-Scott compressed squaring via three Fp4 squarings.
    auto fp4_sqr = [](const Fp2& a0, const Fp2& a1, Fp2& c0, Fp2& c1) {
        Fp2 t0 = f2_sqr(a0);
        Fp2 t1 = f2_sqr(a1);
        c0 = f2_add(f2_mul_xi(t1), t0);
        c1 = f2_sub(f2_sub(f2_sqr(f2_add(a0, a1)), t0), t1);
    };
    Fp2 z0 = a.c0.c0, z4 = a.c0.c1, z3 = a.c0.c2;
    Fp2 z2 = a.c1.c0, z1 = a.c1.c1, z5 = a.c1.c2;
    Fp2 t0, t1, t2, t3;
    fp4_sqr(z0, z1, t0, t1);
    z0 = f2_add(f2_dbl(f2_sub(t0, z0)), t0);
    z1 = f2_add(f2_dbl(f2_add(t1, z1)), t1);
    fp4_sqr(z2, z3, t0, t1);
    fp4_sqr(z4, z5, t2, t3);
    z4 = f2_add(f2_dbl(f2_sub(t0, z4)), t0);
    z5 = f2_add(f2_dbl(f2_add(t1, z5)), t1);
    Fp2 t = f2_mul_xi(t3);
    z2 = f2_add(f2_dbl(f2_add(t, z2)), t);
    z3 = f2_add(f2_dbl(f2_sub(t2, z3)), t2);
    return {{z0, z4, z3}, {z2, z1, z5}};
}

Fp12 final_exponentiation(const Fp12& f) {
    // easy part: f^((p^6-1)(p^2+1))
    Fp12 g = f12_mul(f12_conj(f), f12_inv(f));
    g = f12_mul(f12_frobenius(f12_frobenius(g)), g);
    // hard part (times 3): g^{(x-1)^2 (x+p) (x^2+p^2-1)} * g^3
    Fp12 a = pow_x_minus_1(pow_x_minus_1(g));
    Fp12 b = f12_mul(pow_x(a), f12_frobenius(a));
    Fp12 c = pow_x(pow_x(b));
    c = f12_mul(c, f12_frobenius(f12_frobenius(b)));
    c = f12_mul(c, f12_conj(b));
    return f12_mul(c, f12_mul(f12_sqr(g), g));
}

Fp12 miller_loop(const G1& p, const G2& q) {
    MillerTerm m;
    if (!make_term(p, q, m)) return Fp12::one();
    std::vector<MillerTerm> terms{m};
    return miller_multi(terms);
}

Fp12 pairing(const G1& p, const G2& q) {
    MillerTerm m;
    if (!make_term(p, q, m)) return Fp12::one();
    std::vector<MillerTerm> terms{m};
    return final_exponentiation(miller_multi(terms));
}

Fp12 pairing_product(const std::vector<std::pair<G1, G2>>& pairs) {
    std::vector<MillerTerm> terms;
    for (const auto& [p, q] : pairs) {
        MillerTerm m;
        if (make_term(p, q, m)) terms.push_back(m);
    }
    if (terms.empty()) return Fp12::one();
    return final_exponentiation(miller_multi(terms));
}

Fp12 gt_mul(const Fp12& a, const Fp12& b) { return f12_mul(a, b); }
Fp12 gt_inv(const Fp12& a) { return f12_inv(a); }
Fp12 gt_pow(const Fp12& a, BytesView exp_be) { return f12_pow(a, exp_be); }

bool gt_in_subgroup(const Fp12& a) {
    if (a.is_zero()) return false;
    return f12_pow(a, r_order_bytes()).is_one();
}

}  // namespace cps::bls381
