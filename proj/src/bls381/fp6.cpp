#include "cps/bls381/fp6.hpp"

namespace cps::bls381 {

// Toom-style interpolation (Devegili et al.), 6 Fp2 multiplications.
Fp6 f6_mul(const Fp6& a, const Fp6& b) {
    Fp2 v0 = f2_mul(a.c0, b.c0);
    Fp2 v1 = f2_mul(a.c1, b.c1);
    Fp2 v2 = f2_mul(a.c2, b.c2);
    Fp2 t0 = f2_mul(f2_add(a.c1, a.c2), f2_add(b.c1, b.c2));
    Fp2 t1 = f2_mul(f2_add(a.c0, a.c1), f2_add(b.c0, b.c1));
    Fp2 t2 = f2_mul(f2_add(a.c0, a.c2), f2_add(b.c0, b.c2));
    Fp6 r;
    r.c0 = f2_add(v0, f2_mul_xi(f2_sub(f2_sub(t0, v1), v2)));
    r.c1 = f2_add(f2_sub(f2_sub(t1, v0), v1), f2_mul_xi(v2));
    r.c2 = f2_add(f2_sub(f2_sub(t2, v0), v2), v1);
    return r;
}

Fp6 f6_sqr(const Fp6& a) {
    // CH-SQR3 squaring, 2 squarings + 3 multiplications in Fp2
    Fp2 s0 = f2_sqr(a.c0);
    Fp2 ab = f2_mul(a.c0, a.c1);
    Fp2 s1 = f2_dbl(ab);
    Fp2 s2 = f2_sqr(f2_add(f2_sub(a.c0, a.c1), a.c2));
    Fp2 bc = f2_mul(a.c1, a.c2);
    Fp2 s3 = f2_dbl(bc);
    Fp2 s4 = f2_sqr(a.c2);
    Fp6 r;
    r.c0 = f2_add(s0, f2_mul_xi(s3));
    r.c1 = f2_add(s1, f2_mul_xi(s4));
    r.c2 = f2_sub(f2_add(f2_add(s1, s2), s3), f2_add(s0, s4));
    return r;
}

Fp6 f6_inv(const Fp6& a) {
    // Adjugate method: c_i are the cofactors, t the (Fp2) determinant.
    Fp2 c0 = f2_sub(f2_sqr(a.c0), f2_mul_xi(f2_mul(a.c1, a.c2)));
    Fp2 c1 = f2_sub(f2_mul_xi(f2_sqr(a.c2)), f2_mul(a.c0, a.c1));
    Fp2 c2 = f2_sub(f2_sqr(a.c1), f2_mul(a.c0, a.c2));
    Fp2 t = f2_add(f2_mul(a.c0, c0),
                   f2_mul_xi(f2_add(f2_mul(a.c2, c1), f2_mul(a.c1, c2))));
    Fp2 ti = f2_inv(t);
    return {f2_mul(c0, ti), f2_mul(c1, ti), f2_mul(c2, ti)};
}

}  // namespace cps::bls381
